//! Dense integer matrices with arbitrary-precision entries, Smith normal form
//! and linear congruence solving.
//!
//! Everything above this module (presentations, Hom/Ext, coboundary
//! membership, factor maps) reduces to one of two questions: "what is the
//! Smith form of this matrix" and "does `M x ≡ b` have a solution".

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Row-major integer matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntMatrix{}x{}[", self.rows, self.cols)?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self[(r, c)])?;
            }
        }
        write!(f, "]")
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (r, c): (usize, usize)) -> &BigInt {
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut BigInt {
        &mut self.data[r * self.cols + c]
    }
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from machine-integer rows. All rows must have equal length.
    pub fn from_rows<T: Into<BigInt> + Copy>(rows: &[Vec<T>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged rows");
            for (c, &v) in row.iter().enumerate() {
                m[(r, c)] = v.into();
            }
        }
        m
    }

    pub fn from_diagonal<T: Into<BigInt> + Copy>(diag: &[T]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d.into();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[BigInt] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<BigInt> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t[(c, r)] = self[(r, c)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(r, k)];
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = &other[(k, c)];
                    if !b.is_zero() {
                        out[(r, c)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len(), "dimension mismatch in product");
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    /// Selects the given rows, in order.
    pub fn select_rows(&self, rows: &[usize]) -> IntMatrix {
        let mut out = Self::zeros(rows.len(), self.cols);
        for (i, &r) in rows.iter().enumerate() {
            for c in 0..self.cols {
                out[(i, c)] = self[(r, c)].clone();
            }
        }
        out
    }

    /// Selects the given columns, in order.
    pub fn select_cols(&self, cols: &[usize]) -> IntMatrix {
        let mut out = Self::zeros(self.rows, cols.len());
        for r in 0..self.rows {
            for (j, &c) in cols.iter().enumerate() {
                out[(r, j)] = self[(r, c)].clone();
            }
        }
        out
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hcat(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.rows, other.rows, "row count mismatch in hcat");
        let mut out = Self::zeros(self.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out[(r, c)] = self[(r, c)].clone();
            }
            for c in 0..other.cols {
                out[(r, self.cols + c)] = other[(r, c)].clone();
            }
        }
        out
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.to_rows();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(i, k);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        sign * &a[n - 1][n - 1]
    }

    /// Whether the matrix is square with determinant ±1.
    pub fn is_unimodular(&self) -> bool {
        self.rows == self.cols && self.determinant().abs().is_one()
    }

    /// Whether the matrix defines a homomorphism `⊕ Z/source[i] → ⊕ Z/target[j]`
    /// on the standard generators: `source[i] · column i ≡ 0` modulo the target moduli.
    pub fn is_well_defined_hom(&self, source: &[u64], target: &[u64]) -> bool {
        if self.cols != source.len() || self.rows != target.len() {
            return false;
        }
        (0..self.cols).all(|c| {
            (0..self.rows).all(|r| {
                let v = &self[(r, c)] * BigInt::from(source[c]);
                target[r] == 0 && v.is_zero() || target[r] != 0 && v.mod_floor(&BigInt::from(target[r])).is_zero()
            })
        })
    }
}

/// Which unimodular transforms to accumulate during the reduction.
#[derive(Clone, Copy, Debug, Default)]
pub struct SnfTracking {
    pub left: bool,
    pub left_inverse: bool,
    pub right: bool,
    pub right_inverse: bool,
}

impl SnfTracking {
    pub const ALL: SnfTracking = SnfTracking {
        left: true,
        left_inverse: true,
        right: true,
        right_inverse: true,
    };
}

/// Result of a Smith normal form reduction `D = U · M · V`.
///
/// Untracked transforms are returned as `None`.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub d: IntMatrix,
    pub u: Option<IntMatrix>,
    pub u_inv: Option<IntMatrix>,
    pub v: Option<IntMatrix>,
    pub v_inv: Option<IntMatrix>,
}

impl SmithForm {
    /// Diagonal entries `d_1 | d_2 | ...`, of length `min(rows, cols)`.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols()))
            .map(|i| self.d[(i, i)].clone())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().take_while(|x| !x.is_zero()).count()
    }
}

/// Sparse-aware working storage for the reduction.
struct Work {
    a: Vec<Vec<BigInt>>,
    u: Option<Vec<Vec<BigInt>>>,
    u_inv: Option<Vec<Vec<BigInt>>>,
    v: Option<Vec<Vec<BigInt>>>,
    v_inv: Option<Vec<Vec<BigInt>>>,
}

fn identity_rows(n: usize) -> Vec<Vec<BigInt>> {
    (0..n)
        .map(|i| {
            let mut row = vec![BigInt::zero(); n];
            row[i] = BigInt::one();
            row
        })
        .collect()
}

fn rows_to_matrix(rows: Vec<Vec<BigInt>>, cols: usize) -> IntMatrix {
    let n = rows.len();
    let data: Vec<BigInt> = rows.into_iter().flatten().collect();
    debug_assert_eq!(data.len(), n * cols);
    IntMatrix { rows: n, cols, data }
}

/// `rows[dst] += q * rows[src]`, touching only nonzero entries of the source row.
fn row_axpy(rows: &mut [Vec<BigInt>], dst: usize, src: usize, q: &BigInt) {
    if q.is_zero() || dst == src {
        return;
    }
    let (d, s) = if dst < src {
        let (lo, hi) = rows.split_at_mut(src);
        (&mut lo[dst], &hi[0])
    } else {
        let (lo, hi) = rows.split_at_mut(dst);
        (&mut hi[0], &lo[src])
    };
    for (x, y) in d.iter_mut().zip(s.iter()) {
        if !y.is_zero() {
            *x += q * y;
        }
    }
}

/// `col dst += q * col src` in row-major storage.
fn col_axpy(rows: &mut [Vec<BigInt>], dst: usize, src: usize, q: &BigInt) {
    if q.is_zero() || dst == src {
        return;
    }
    for row in rows.iter_mut() {
        if !row[src].is_zero() {
            let add = q * &row[src];
            row[dst] += add;
        }
    }
}

fn swap_cols(rows: &mut [Vec<BigInt>], i: usize, j: usize) {
    if i != j {
        for row in rows.iter_mut() {
            row.swap(i, j);
        }
    }
}

impl Work {
    /// `row_dst += q * row_src` on the working matrix, tracked as a left factor.
    fn row_op(&mut self, dst: usize, src: usize, q: &BigInt) {
        row_axpy(&mut self.a, dst, src, q);
        if let Some(u) = self.u.as_mut() {
            row_axpy(u, dst, src, q);
        }
        if let Some(ui) = self.u_inv.as_mut() {
            col_axpy(ui, src, dst, &-q);
        }
    }

    fn col_op(&mut self, dst: usize, src: usize, q: &BigInt) {
        col_axpy(&mut self.a, dst, src, q);
        if let Some(v) = self.v.as_mut() {
            col_axpy(v, dst, src, q);
        }
        if let Some(vi) = self.v_inv.as_mut() {
            row_axpy(vi, src, dst, &-q);
        }
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        self.a.swap(i, j);
        if let Some(u) = self.u.as_mut() {
            u.swap(i, j);
        }
        if let Some(ui) = self.u_inv.as_mut() {
            swap_cols(ui, i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        swap_cols(&mut self.a, i, j);
        if let Some(v) = self.v.as_mut() {
            swap_cols(v, i, j);
        }
        if let Some(vi) = self.v_inv.as_mut() {
            vi.swap(i, j);
        }
    }

    fn negate_row(&mut self, i: usize) {
        for x in self.a[i].iter_mut() {
            *x = -std::mem::take(x);
        }
        if let Some(u) = self.u.as_mut() {
            for x in u[i].iter_mut() {
                *x = -std::mem::take(x);
            }
        }
        if let Some(ui) = self.u_inv.as_mut() {
            for row in ui.iter_mut() {
                row[i] = -std::mem::take(&mut row[i]);
            }
        }
    }

    /// Smallest nonzero |entry| in the trailing submatrix, first in row-major order.
    fn find_pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        let mut best_abs: Option<BigInt> = None;
        for (r, row) in self.a.iter().enumerate().skip(t) {
            for (c, x) in row.iter().enumerate().skip(t) {
                if x.is_zero() {
                    continue;
                }
                let ax = x.abs();
                if best_abs.as_ref().is_none_or(|b| ax < *b) {
                    let unit = ax.is_one();
                    best = Some((r, c));
                    best_abs = Some(ax);
                    if unit {
                        return best;
                    }
                }
            }
        }
        best
    }

    /// Smallest nonzero |entry| in row t / column t beyond the pivot position.
    fn find_cross_pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<((usize, usize), BigInt)> = None;
        let mut consider = |pos: (usize, usize), x: &BigInt| {
            if !x.is_zero() {
                let ax = x.abs();
                if best.as_ref().is_none_or(|(_, b)| ax < *b) {
                    best = Some((pos, ax));
                }
            }
        };
        consider((t, t), &self.a[t][t]);
        for c in t + 1..self.a[t].len() {
            consider((t, c), &self.a[t][c]);
        }
        for r in t + 1..self.a.len() {
            consider((r, t), &self.a[r][t]);
        }
        best.map(|(p, _)| p)
    }

    /// Clears row t and column t around the pivot, moving smaller remainders
    /// into the pivot position until the cross is empty.
    fn clear_cross(&mut self, t: usize) {
        loop {
            if let Some((r, c)) = self.find_cross_pivot(t) {
                self.swap_rows(t, r);
                self.swap_cols(t, c);
            }
            let pivot = self.a[t][t].clone();
            let mut clean = true;
            for r in t + 1..self.a.len() {
                if self.a[r][t].is_zero() {
                    continue;
                }
                let q = &self.a[r][t] / &pivot;
                self.row_op(r, t, &-q);
                if !self.a[r][t].is_zero() {
                    clean = false;
                }
            }
            let cols = self.a[t].len();
            for c in t + 1..cols {
                if self.a[t][c].is_zero() {
                    continue;
                }
                let q = &self.a[t][c] / &pivot;
                self.col_op(c, t, &-q);
                if !self.a[t][c].is_zero() {
                    clean = false;
                }
            }
            if clean {
                return;
            }
        }
    }

    fn reduce(&mut self) {
        let rows = self.a.len();
        let cols = self.a.first().map_or(0, Vec::len);
        for t in 0..rows.min(cols) {
            let Some((r, c)) = self.find_pivot(t) else {
                return;
            };
            self.swap_rows(t, r);
            self.swap_cols(t, c);
            loop {
                self.clear_cross(t);
                let pivot = self.a[t][t].clone();
                let offender = (t + 1..rows).find(|&r| {
                    self.a[r][t + 1..]
                        .iter()
                        .any(|x| !x.is_zero() && !x.is_multiple_of(&pivot))
                });
                match offender {
                    Some(r) => self.row_op(t, r, &BigInt::one()),
                    None => break,
                }
            }
            if self.a[t][t].is_negative() {
                self.negate_row(t);
            }
        }
    }
}

/// Smith normal form with the requested transforms.
///
/// Pivoting is deterministic: the smallest nonzero absolute value in the
/// trailing submatrix, first in row-major order.
pub fn smith_form(m: &IntMatrix, tracking: SnfTracking) -> SmithForm {
    let (rows, cols) = (m.rows(), m.cols());
    let mut w = Work {
        a: m.to_rows(),
        u: tracking.left.then(|| identity_rows(rows)),
        u_inv: tracking.left_inverse.then(|| identity_rows(rows)),
        v: tracking.right.then(|| identity_rows(cols)),
        v_inv: tracking.right_inverse.then(|| identity_rows(cols)),
    };
    w.reduce();
    SmithForm {
        d: rows_to_matrix(w.a, cols),
        u: w.u.map(|x| rows_to_matrix(x, rows)),
        u_inv: w.u_inv.map(|x| rows_to_matrix(x, rows)),
        v: w.v.map(|x| rows_to_matrix(x, cols)),
        v_inv: w.v_inv.map(|x| rows_to_matrix(x, cols)),
    }
}

/// `(U, D, V)` with `D = U · M · V` diagonal, `d_i | d_{i+1}`, `d_i ≥ 0`,
/// and `U`, `V` unimodular.
pub fn smith_normal_form(m: &IntMatrix) -> (IntMatrix, IntMatrix, IntMatrix) {
    let f = smith_form(
        m,
        SnfTracking {
            left: true,
            right: true,
            ..Default::default()
        },
    );
    (f.u.unwrap(), f.d, f.v.unwrap())
}

/// Solves `M x ≡ b` row-wise modulo `target_moduli` (a modulus of 0 means an
/// exact equation over the integers).
///
/// The system is augmented with one auxiliary column per nonzero modulus and
/// reduced to Smith form; the particular solution sets every free Smith
/// coordinate to zero. When every modulus is nonzero the entries of `x` are
/// then reduced into `[0, L)` with `L` the least common multiple of the
/// moduli, so the returned witness is canonical for the input.
pub fn solve_congruences(m: &IntMatrix, target_moduli: &[BigInt], b: &[BigInt]) -> Option<Vec<BigInt>> {
    solve_congruences_with(m, target_moduli, None, b)
}

/// As [`solve_congruences`], but the unknowns live in `⊕ Z/unknown_moduli[j]`
/// and the answer is reduced into `[0, unknown_moduli[j])` per entry.
///
/// The caller guarantees that the system is well defined on these residues,
/// i.e. `unknown_moduli[j] · column j ≡ 0` modulo the targets.
pub fn solve_congruences_with(
    m: &IntMatrix,
    target_moduli: &[BigInt],
    unknown_moduli: Option<&[BigInt]>,
    b: &[BigInt],
) -> Option<Vec<BigInt>> {
    assert_eq!(m.rows(), target_moduli.len(), "one modulus per row");
    assert_eq!(m.rows(), b.len(), "one right-hand side per row");
    let n = m.cols();
    let aux: Vec<usize> = (0..m.rows()).filter(|&r| !target_moduli[r].is_zero()).collect();
    let mut e = IntMatrix::zeros(m.rows(), aux.len());
    for (j, &r) in aux.iter().enumerate() {
        e[(r, j)] = target_moduli[r].clone();
    }
    let augmented = m.hcat(&e);
    let f = smith_form(
        &augmented,
        SnfTracking {
            left: true,
            right: true,
            ..Default::default()
        },
    );
    let u = f.u.as_ref().unwrap();
    let v = f.v.as_ref().unwrap();
    let ub = u.mul_vec(b);
    let diag = f.diagonal();
    let mut z = vec![BigInt::zero(); augmented.cols()];
    for (i, c) in ub.iter().enumerate() {
        let d = diag.get(i).cloned().unwrap_or_else(BigInt::zero);
        if d.is_zero() {
            if !c.is_zero() {
                return None;
            }
        } else {
            let (q, r) = c.div_rem(&d);
            if !r.is_zero() {
                return None;
            }
            z[i] = q;
        }
    }
    let full = v.mul_vec(&z);
    let mut x: Vec<BigInt> = full.into_iter().take(n).collect();
    match unknown_moduli {
        Some(mods) => {
            assert_eq!(mods.len(), n, "one modulus per unknown");
            for (xi, mi) in x.iter_mut().zip(mods) {
                if !mi.is_zero() {
                    *xi = xi.mod_floor(mi);
                }
            }
        }
        None => {
            if !target_moduli.is_empty() && target_moduli.iter().all(|t| !t.is_zero()) {
                let l = target_moduli.iter().fold(BigInt::one(), |acc, t| acc.lcm(t));
                for xi in x.iter_mut() {
                    *xi = xi.mod_floor(&l);
                }
            }
        }
    }
    Some(x)
}

/// Checks `M x ≡ b` modulo the targets exactly.
pub fn satisfies_congruences(m: &IntMatrix, target_moduli: &[BigInt], x: &[BigInt], b: &[BigInt]) -> bool {
    let mx = m.mul_vec(x);
    mx.iter()
        .zip(b)
        .zip(target_moduli)
        .all(|((l, r), t)| if t.is_zero() { l == r } else { (l - r).mod_floor(t).is_zero() })
}

/// Row-reduces `rows · x ≡ rhs (mod e)` with unimodular integer row
/// operations, so the solution set modulo `e` is unchanged.
///
/// Returns the nonzero rows with their right-hand sides, at most one per
/// column, or `None` when a row reduces to `0 ≡ c` with `c ≠ 0`.
pub fn row_reduce_mod(mut rows: Vec<Vec<u64>>, mut rhs: Vec<u64>, e: u64) -> Option<(Vec<Vec<u64>>, Vec<u64>)> {
    assert_eq!(rows.len(), rhs.len());
    let cols = rows.first().map_or(0, Vec::len);
    let m = e as u128;
    let combine = |p: &[u64], q: &[u64], s: i128, t: i128| -> Vec<u64> {
        p.iter()
            .zip(q)
            .map(|(&x, &y)| (s * x as i128 + t * y as i128).rem_euclid(m as i128) as u64)
            .collect()
    };
    let mut pivot = 0;
    for col in 0..cols {
        let Some(first) = (pivot..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(pivot, first);
        rhs.swap(pivot, first);
        for r in pivot + 1..rows.len() {
            let b = rows[r][col];
            if b == 0 {
                continue;
            }
            let a = rows[pivot][col];
            let eg = (a as i128).extended_gcd(&(b as i128));
            let (g, s, t) = (eg.gcd, eg.x, eg.y);
            let (ag, bg) = (a as i128 / g, b as i128 / g);
            let new_p = combine(&rows[pivot], &rows[r], s, t);
            let new_r = combine(&rows[pivot], &rows[r], -bg, ag);
            let rp = (s * rhs[pivot] as i128 + t * rhs[r] as i128).rem_euclid(m as i128) as u64;
            let rr = (-bg * rhs[pivot] as i128 + ag * rhs[r] as i128).rem_euclid(m as i128) as u64;
            rows[pivot] = new_p;
            rows[r] = new_r;
            rhs[pivot] = rp;
            rhs[r] = rr;
        }
        pivot += 1;
        if pivot == rows.len() {
            break;
        }
    }
    if rhs[pivot..].iter().any(|&c| c != 0) {
        return None;
    }
    rows.truncate(pivot);
    rhs.truncate(pivot);
    // Drop rows that vanished modulo e.
    let keep: Vec<usize> = (0..rows.len()).filter(|&r| rows[r].iter().any(|&x| x != 0) || rhs[r] != 0).collect();
    if keep.iter().any(|&r| rows[r].iter().all(|&x| x == 0)) {
        return None;
    }
    Some((
        keep.iter().map(|&r| rows[r].clone()).collect(),
        keep.iter().map(|&r| rhs[r]).collect(),
    ))
}

/// Solves `rows · x ≡ rhs (mod e)` for `x ∈ (Z/e)^n`: modular row reduction
/// followed by [`solve_congruences_with`].
pub fn solve_mod_uniform(rows: Vec<Vec<u64>>, rhs: Vec<u64>, n: usize, e: u64) -> Option<Vec<u64>> {
    if e == 1 {
        return Some(vec![0; n]);
    }
    let (rows, rhs) = row_reduce_mod(rows, rhs, e)?;
    if rows.is_empty() {
        return Some(vec![0; n]);
    }
    let m = IntMatrix::from_rows(&rows);
    let targets = vec![big(e); rows.len()];
    let b: Vec<BigInt> = rhs.iter().map(|&c| big(c)).collect();
    let unknown = vec![big(e); n];
    let x = solve_congruences_with(&m, &targets, Some(&unknown), &b)?;
    Some(x.iter().map(to_u64).collect())
}

pub(crate) fn to_u64(x: &BigInt) -> u64 {
    x.to_u64().expect("value does not fit a machine word")
}

pub(crate) fn big(x: u64) -> BigInt {
    BigInt::from(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn is_smith_diagonal(d: &IntMatrix) -> bool {
        for r in 0..d.rows() {
            for c in 0..d.cols() {
                if r != c && !d[(r, c)].is_zero() {
                    return false;
                }
            }
        }
        let diag: Vec<BigInt> = (0..d.rows().min(d.cols())).map(|i| d[(i, i)].clone()).collect();
        diag.iter().all(|x| !x.is_negative())
            && diag.windows(2).all(|w| {
                if w[0].is_zero() {
                    w[1].is_zero()
                } else {
                    w[1].is_multiple_of(&w[0])
                }
            })
    }

    #[test]
    fn snf_of_two_by_two() {
        let m = IntMatrix::from_rows(&[vec![2, 4], vec![6, 8]]);
        let (u, d, v) = smith_normal_form(&m);
        assert_eq!(d, IntMatrix::from_diagonal(&[2, 4]));
        assert_eq!(u.mul(&m).mul(&v), d);
        assert!(u.is_unimodular());
        assert!(v.is_unimodular());
    }

    #[test]
    fn snf_identity_and_zero() {
        let id = IntMatrix::identity(2);
        assert_eq!(smith_normal_form(&id).1, id);
        let z = IntMatrix::zeros(2, 3);
        assert_eq!(smith_normal_form(&z).1, z);
        let empty = IntMatrix::zeros(0, 3);
        let (u, d, v) = smith_normal_form(&empty);
        assert_eq!((u.rows(), d.rows(), v.rows()), (0, 0, 3));
    }

    #[test]
    fn snf_tracks_inverses() {
        let m = IntMatrix::from_rows(&[vec![4, 6, 2], vec![3, 0, 9], vec![1, 1, 1]]);
        let f = smith_form(&m, SnfTracking::ALL);
        let (u, ui, v, vi) = (f.u.unwrap(), f.u_inv.unwrap(), f.v.unwrap(), f.v_inv.unwrap());
        assert_eq!(u.mul(&ui), IntMatrix::identity(3));
        assert_eq!(v.mul(&vi), IntMatrix::identity(3));
        assert_eq!(u.mul(&m).mul(&v), f.d);
        assert!(is_smith_diagonal(&f.d));
    }

    #[test]
    fn divisibility_fixup() {
        // diag(2, 3) is diagonal but not in Smith form.
        let m = IntMatrix::from_diagonal(&[2, 3]);
        let (_, d, _) = smith_normal_form(&m);
        assert_eq!(d, IntMatrix::from_diagonal(&[1, 6]));
    }

    #[test]
    fn congruence_examples() {
        let m = IntMatrix::from_rows(&[vec![2]]);
        assert_eq!(solve_congruences(&m, &[big(4)], &[big(1)]), None);
        let m3 = IntMatrix::from_rows(&[vec![3]]);
        assert_eq!(solve_congruences(&m3, &[big(4)], &[big(1)]), Some(vec![big(3)]));
        assert_eq!(solve_congruences(&m, &[big(4)], &[big(2)]), Some(vec![big(1)]));
    }

    #[test]
    fn exact_equations_over_z() {
        let m = IntMatrix::from_rows(&[vec![2, 3]]);
        let x = solve_congruences(&m, &[BigInt::zero()], &[big(7)]).unwrap();
        assert!(satisfies_congruences(&m, &[BigInt::zero()], &x, &[big(7)]));
        let m2 = IntMatrix::from_rows(&[vec![2, 4]]);
        assert_eq!(solve_congruences(&m2, &[BigInt::zero()], &[big(7)]), None);
    }

    #[test]
    fn well_defined_hom_check() {
        // Z/4 -> Z/2, 1 |-> 1 is fine; Z/3 -> Z/2, 1 |-> 1 is not.
        let m = IntMatrix::from_rows(&[vec![1]]);
        assert!(m.is_well_defined_hom(&[4], &[2]));
        assert!(!m.is_well_defined_hom(&[3], &[2]));
    }

    #[test]
    fn modular_row_reduction_keeps_solutions() {
        // x + y ≡ 1, 2x + 2y ≡ 2, x - y ≡ 0 (mod 4)
        let rows = vec![vec![1, 1], vec![2, 2], vec![1, 3]];
        let rhs = vec![1, 2, 0];
        let x = solve_mod_uniform(rows.clone(), rhs.clone(), 2, 4);
        // brute force
        let mut sols = Vec::new();
        for a in 0..4u64 {
            for b in 0..4u64 {
                if rows.iter().zip(&rhs).all(|(r, &c)| (r[0] * a + r[1] * b) % 4 == c) {
                    sols.push(vec![a, b]);
                }
            }
        }
        assert!(sols.is_empty() == x.is_none());
        if let Some(x) = x {
            assert!(sols.contains(&x));
        }
        assert_eq!(solve_mod_uniform(vec![vec![2]], vec![1], 1, 4), None);
    }

    #[test]
    fn determinant_small() {
        let m = IntMatrix::from_rows(&[vec![2, 1, 0], vec![1, 3, 1], vec![0, 1, 4]]);
        assert_eq!(m.determinant(), big(18));
        let sing = IntMatrix::from_rows(&[vec![0, 1], vec![0, 2]]);
        assert_eq!(sing.determinant(), BigInt::zero());
    }
}
