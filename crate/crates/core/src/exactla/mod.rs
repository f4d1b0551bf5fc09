//! Exact linear algebra over the rationals and over polynomial rings.

pub mod modp;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polyring::DualPolynomial;

/// Default dimension cap for symbolic determinants.
pub const SYMBOLIC_DET_CAP: usize = 14;

/// Sparse rational matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    entries: BTreeMap<(usize, usize), BigRational>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix { rows, cols, entries: BTreeMap::new() }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigRational::one());
        }
        m
    }

    pub fn from_dense(rows: &[Vec<BigRational>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged matrix");
            for (j, v) in r.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    pub fn from_ints(rows: &[Vec<i64>]) -> Self {
        let dense: Vec<Vec<BigRational>> = rows
            .iter()
            .map(|r| r.iter().map(|&v| BigRational::from_integer(v.into())).collect())
            .collect();
        Self::from_dense(&dense)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, i: usize, j: usize) -> BigRational {
        self.entries.get(&(i, j)).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigRational) {
        assert!(i < self.rows && j < self.cols, "index out of range");
        if v.is_zero() {
            self.entries.remove(&(i, j));
        } else {
            self.entries.insert((i, j), v);
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(usize, usize), &BigRational)> {
        self.entries.iter()
    }

    pub fn transpose(&self) -> Self {
        let entries = self.entries.iter().map(|(&(i, j), v)| ((j, i), v.clone())).collect();
        RationalMatrix { rows: self.cols, cols: self.rows, entries }
    }

    pub fn to_dense(&self) -> Vec<Vec<BigRational>> {
        let mut out = vec![vec![BigRational::zero(); self.cols]; self.rows];
        for (&(i, j), v) in &self.entries {
            out[i][j] = v.clone();
        }
        out
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut m = Self::zeros(rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                if let Some(v) = self.entries.get(&(i, j)) {
                    m.set(a, b, v.clone());
                }
            }
        }
        m
    }

    /// Each row scaled to a primitive integer vector (sparse).
    fn integer_rows(&self) -> Vec<Vec<(usize, BigInt)>> {
        let mut rows: Vec<Vec<(usize, BigRational)>> = vec![Vec::new(); self.rows];
        for (&(i, j), v) in &self.entries {
            rows[i].push((j, v.clone()));
        }
        rows.into_iter()
            .filter(|r| !r.is_empty())
            .map(|r| {
                let l = r.iter().fold(BigInt::one(), |acc, (_, v)| acc.lcm(v.denom()));
                let ints: Vec<(usize, BigInt)> = r.into_iter().map(|(j, v)| (j, (v * &l).to_integer())).collect();
                make_primitive(ints)
            })
            .collect()
    }

    /// Residues modulo [`modp::P`], `None` if some denominator vanishes.
    pub fn to_modp(&self) -> Option<Vec<Vec<u64>>> {
        let mut out = vec![vec![0u64; self.cols]; self.rows];
        for (&(i, j), v) in &self.entries {
            out[i][j] = modp::from_rational(v)?;
        }
        Some(out)
    }
}

fn make_primitive(mut row: Vec<(usize, BigInt)>) -> Vec<(usize, BigInt)> {
    let g = row.iter().fold(BigInt::zero(), |acc, (_, v)| acc.gcd(v));
    if !g.is_zero() && !g.is_one() {
        for (_, v) in row.iter_mut() {
            *v /= &g;
        }
    }
    row
}

/// Exact rank over the rationals.
///
/// Matrices whose rows carry at most two nonzeros (catalecticants of
/// binomials) use sparse fraction-free elimination, which keeps that shape;
/// anything denser goes through dense Bareiss elimination.
pub fn rank(m: &RationalMatrix) -> usize {
    let rows = m.integer_rows();
    if rows.iter().all(|r| r.len() <= 2) {
        sparse_rank(rows)
    } else {
        let dense = densify(&rows, m.cols());
        bareiss_rank(dense)
    }
}

fn densify(rows: &[Vec<(usize, BigInt)>], cols: usize) -> Vec<Vec<BigInt>> {
    rows.iter()
        .map(|r| {
            let mut out = vec![BigInt::zero(); cols];
            for (j, v) in r {
                out[*j] = v.clone();
            }
            out
        })
        .collect()
}

/// Combines `a*row - b*pivot` for sparse sorted rows, dropping zeros.
fn combine(row: &[(usize, BigInt)], a: &BigInt, pivot: &[(usize, BigInt)], b: &BigInt) -> Vec<(usize, BigInt)> {
    let mut out = Vec::with_capacity(row.len() + pivot.len());
    let (mut i, mut j) = (0, 0);
    while i < row.len() || j < pivot.len() {
        let take_row = j >= pivot.len() || (i < row.len() && row[i].0 < pivot[j].0);
        let take_piv = i >= row.len() || (j < pivot.len() && pivot[j].0 < row[i].0);
        if take_row {
            out.push((row[i].0, a * &row[i].1));
            i += 1;
        } else if take_piv {
            out.push((pivot[j].0, -(b * &pivot[j].1)));
            j += 1;
        } else {
            let v = a * &row[i].1 - b * &pivot[j].1;
            if !v.is_zero() {
                out.push((row[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    make_primitive(out)
}

/// Sparse fraction-free elimination with Markowitz-style pivoting: the
/// sparsest remaining row, and within it the least-used column; ties go to the
/// lowest index.
fn sparse_rank(rows: Vec<Vec<(usize, BigInt)>>) -> usize {
    let mut active: Vec<Vec<(usize, BigInt)>> = rows.into_iter().filter(|r| !r.is_empty()).collect();
    let mut rank = 0;
    while !active.is_empty() {
        let mut col_count: BTreeMap<usize, usize> = BTreeMap::new();
        for r in &active {
            for (j, _) in r {
                *col_count.entry(*j).or_insert(0) += 1;
            }
        }
        let (pi, _) = active.iter().enumerate().min_by_key(|(i, r)| (r.len(), *i)).expect("nonempty");
        let pivot = active.swap_remove(pi);
        let (pj, pv) = pivot
            .iter()
            .min_by_key(|(j, _)| (col_count[j], *j))
            .map(|(j, v)| (*j, v.clone()))
            .expect("pivot row is nonempty");
        rank += 1;
        let mut next = Vec::with_capacity(active.len());
        for r in active {
            match r.iter().find(|(j, _)| *j == pj) {
                None => next.push(r),
                Some((_, rv)) => {
                    let g = pv.gcd(rv);
                    let a = &pv / &g;
                    let b = rv / &g;
                    let reduced = combine(&r, &a, &pivot, &b);
                    if !reduced.is_empty() {
                        next.push(reduced);
                    }
                }
            }
        }
        active = next;
    }
    rank
}

/// Dense fraction-free (Bareiss) rank with column skipping.
fn bareiss_rank(mut a: Vec<Vec<BigInt>>) -> usize {
    let m = a.len();
    if m == 0 {
        return 0;
    }
    let n = a[0].len();
    let mut prev = BigInt::one();
    let mut k = 0;
    for col in 0..n {
        if k == m {
            break;
        }
        let candidate = (k..m)
            .filter(|&i| !a[i][col].is_zero())
            .min_by_key(|&i| (a[i][col..].iter().filter(|v| !v.is_zero()).count(), i));
        let Some(piv) = candidate else {
            continue;
        };
        a.swap(k, piv);
        let (top, bottom) = a.split_at_mut(k + 1);
        let pivot_row = &top[k];
        for row in bottom.iter_mut() {
            let factor = row[col].clone();
            for j in (col + 1)..n {
                let v = &pivot_row[col] * &row[j] - &factor * &pivot_row[j];
                row[j] = if prev.is_one() { v } else { v / &prev };
            }
            row[col] = BigInt::zero();
        }
        prev = a[k][col].clone();
        k += 1;
    }
    k
}

/// Row space built one row at a time; reports whether each new row is
/// independent of those already accepted.
///
/// Stored rows are integer, primitive, and keyed by their smallest column;
/// every other column of a stored row is larger than its key.
#[derive(Clone, Debug, Default)]
pub struct RowEchelon {
    rows: BTreeMap<usize, Vec<(usize, BigInt)>>,
}

impl RowEchelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Inserts a sparse rational row; `true` when it enlarged the span.
    pub fn insert(&mut self, row: &[(usize, BigRational)]) -> bool {
        let l = row.iter().fold(BigInt::one(), |acc, (_, v)| acc.lcm(v.denom()));
        let mut r: Vec<(usize, BigInt)> = row
            .iter()
            .filter(|(_, v)| !v.is_zero())
            .map(|(j, v)| (*j, (v * &l).to_integer()))
            .collect();
        r.sort_by_key(|(j, _)| *j);
        self.insert_integer(r)
    }

    fn insert_integer(&mut self, mut r: Vec<(usize, BigInt)>) -> bool {
        loop {
            let Some((lead, lv)) = r.first().cloned() else {
                return false;
            };
            match self.rows.get(&lead) {
                None => {
                    self.rows.insert(lead, make_primitive(r));
                    return true;
                }
                Some(pivot) => {
                    let pv = &pivot[0].1;
                    let g = pv.gcd(&lv);
                    r = combine(&r, &(pv / &g), pivot, &(&lv / &g));
                }
            }
        }
    }
}

/// Ring operations needed by Bareiss determinant elimination.
pub trait BareissRing: Clone {
    fn is_zero_elem(&self) -> bool;
    fn one_like(&self) -> Self;
    fn mul_sub(a: &Self, b: &Self, c: &Self, d: &Self) -> Self;
    fn div_exact_elem(&self, d: &Self) -> Self;
    fn negate(&self) -> Self;
    /// Pivot preference; smaller is better.
    fn weight(&self) -> usize;
}

impl BareissRing for BigInt {
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn one_like(&self) -> Self {
        BigInt::one()
    }
    fn mul_sub(a: &Self, b: &Self, c: &Self, d: &Self) -> Self {
        a * b - c * d
    }
    fn div_exact_elem(&self, d: &Self) -> Self {
        self / d
    }
    fn negate(&self) -> Self {
        -self
    }
    fn weight(&self) -> usize {
        self.bits() as usize
    }
}

impl BareissRing for DualPolynomial {
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn one_like(&self) -> Self {
        DualPolynomial::one(self.nvars())
    }
    fn mul_sub(a: &Self, b: &Self, c: &Self, d: &Self) -> Self {
        &(a * b) - &(c * d)
    }
    fn div_exact_elem(&self, d: &Self) -> Self {
        self.div_exact(d).expect("Bareiss quotient is exact")
    }
    fn negate(&self) -> Self {
        -self
    }
    fn weight(&self) -> usize {
        self.len()
    }
}

/// Bareiss determinant of a dense square matrix over an integral domain.
/// `zero` is the additive identity used for the empty and singular cases.
pub fn bareiss_det<T: BareissRing>(mut a: Vec<Vec<T>>, zero: T, one: T) -> T {
    let n = a.len();
    if n == 0 {
        return one;
    }
    let mut prev = one;
    let mut negate = false;
    for k in 0..n {
        let nnz = |row: &Vec<T>| row[k..].iter().filter(|v| !v.is_zero_elem()).count();
        let candidate = (k..n)
            .filter(|&i| !a[i][k].is_zero_elem())
            .min_by_key(|&i| (nnz(&a[i]), a[i][k].weight(), i));
        let Some(piv) = candidate else {
            return zero;
        };
        if piv != k {
            a.swap(k, piv);
            negate = !negate;
        }
        let (top, bottom) = a.split_at_mut(k + 1);
        let pivot_row = &top[k];
        for row in bottom.iter_mut() {
            for j in (k + 1)..n {
                let v = T::mul_sub(&pivot_row[k], &row[j], &row[k], &pivot_row[j]);
                row[j] = if k == 0 { v } else { v.div_exact_elem(&prev) };
            }
            row[k] = zero.clone();
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    if negate {
        det.negate()
    } else {
        det
    }
}

/// Exact determinant.
pub fn det(m: &RationalMatrix) -> Result<BigRational> {
    if !m.is_square() {
        return Err(Error::input(format!("determinant of a {}x{} matrix", m.rows(), m.cols())));
    }
    let n = m.rows();
    let mut scale = BigInt::one();
    let mut dense = Vec::with_capacity(n);
    for row in m.to_dense() {
        let l = row.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
        scale *= &l;
        dense.push(row.into_iter().map(|v| (v * &l).to_integer()).collect::<Vec<BigInt>>());
    }
    let d = bareiss_det(dense, BigInt::zero(), BigInt::one());
    Ok(BigRational::new(d, scale))
}

/// Whether a square rational matrix is nonsingular; modular fast path.
pub fn is_nonsingular(m: &RationalMatrix) -> bool {
    if !m.is_square() {
        return false;
    }
    if let Some(res) = m.to_modp() {
        if modp::rank(res) == m.rows() {
            return true;
        }
    }
    !det(m).expect("square").is_zero()
}

/// Whether `m` has rank `min(rows, cols)`; modular fast path.
pub fn has_full_rank(m: &RationalMatrix) -> bool {
    let target = m.rows().min(m.cols());
    if let Some(res) = m.to_modp() {
        if modp::rank(res) == target {
            return true;
        }
    }
    rank(m) == target
}

/// Exact rank of `m` when it is below `target`, `None` when `rank(m) >=
/// target`. A modular rank reaching `target` settles the question without
/// exact elimination.
pub fn rank_below(m: &RationalMatrix, target: usize) -> Option<usize> {
    if target == 0 {
        return None;
    }
    if let Some(res) = m.to_modp() {
        if modp::rank(res) >= target {
            return None;
        }
    }
    let r = rank(m);
    (r < target).then_some(r)
}

pub fn rank_at_least(m: &RationalMatrix, target: usize) -> bool {
    rank_below(m, target).is_none()
}

/// Coordinates of each row of `targets` in the span of the (independent)
/// rows of `basis`: returns `C` with `C * basis = targets`, or `None` when
/// some target lies outside the span.
pub fn solve_in_row_span(basis: &RationalMatrix, targets: &RationalMatrix) -> Option<RationalMatrix> {
    assert_eq!(basis.cols(), targets.cols(), "column mismatch");
    let h = basis.rows();
    let m = targets.rows();
    // Columns of the augmented system are the unknown coefficients, then one
    // right-hand side per target; equations are indexed by the basis columns.
    let mut eq: Vec<Vec<BigRational>> = vec![vec![BigRational::zero(); h + m]; basis.cols()];
    for (&(i, j), v) in basis.entries() {
        eq[j][i] = v.clone();
    }
    for (&(i, j), v) in targets.entries() {
        eq[j][h + i] = v.clone();
    }
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for c in 0..h {
        let Some(p) = (r..eq.len()).find(|&i| !eq[i][c].is_zero()) else {
            continue;
        };
        eq.swap(r, p);
        let inv = eq[r][c].recip();
        for v in eq[r].iter_mut() {
            *v *= &inv;
        }
        let pivot = eq[r].clone();
        for (i, row) in eq.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, pv) in row.iter_mut().zip(&pivot) {
                    if !pv.is_zero() {
                        *x -= &f * pv;
                    }
                }
            }
        }
        pivot_cols.push(c);
        r += 1;
    }
    if eq[r..].iter().any(|row| row[h..].iter().any(|v| !v.is_zero())) {
        return None;
    }
    let mut out = RationalMatrix::zeros(m, h);
    for (row_idx, &c) in pivot_cols.iter().enumerate() {
        for t in 0..m {
            out.set(t, c, eq[row_idx][h + t].clone());
        }
    }
    Some(out)
}

/// Sparse matrix of homogeneous polynomials in the dual variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    nvars: usize,
    degree: u32,
    entries: BTreeMap<(usize, usize), DualPolynomial>,
}

impl PolyMatrix {
    /// Checks homogeneity of every entry against a common degree.
    pub fn new(rows: usize, cols: usize, nvars: usize, entries: BTreeMap<(usize, usize), DualPolynomial>) -> Result<Self> {
        let mut degree = None;
        for (&(i, j), p) in &entries {
            if i >= rows || j >= cols {
                return Err(Error::input(format!("entry ({},{}) out of range", i, j)));
            }
            if p.nvars() != nvars {
                return Err(Error::input("entry has wrong variable count"));
            }
            if p.is_zero() {
                continue;
            }
            if !p.is_homogeneous() {
                return Err(Error::input(format!("entry ({},{}) is not homogeneous", i, j)));
            }
            let e = p.degree().expect("nonzero");
            match degree {
                None => degree = Some(e),
                Some(d) if d != e => {
                    return Err(Error::input(format!("entry degrees {} and {} differ", d, e)));
                }
                _ => {}
            }
        }
        let entries = entries.into_iter().filter(|(_, p)| !p.is_zero()).collect();
        Ok(PolyMatrix { rows, cols, nvars, degree: degree.unwrap_or(0), entries })
    }

    pub fn from_dense(nvars: usize, rows: Vec<Vec<DualPolynomial>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut entries = BTreeMap::new();
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != c {
                return Err(Error::input("ragged polynomial matrix"));
            }
            for (j, p) in row.into_iter().enumerate() {
                entries.insert((i, j), p);
            }
        }
        Self::new(r, c, nvars, entries)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Common degree of the entries (0 for the zero matrix).
    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> DualPolynomial {
        self.entries.get(&(i, j)).cloned().unwrap_or_else(|| DualPolynomial::zero(self.nvars))
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(usize, usize), &DualPolynomial)> {
        self.entries.iter()
    }

    pub fn evaluate(&self, point: &[BigRational]) -> RationalMatrix {
        let mut m = RationalMatrix::zeros(self.rows, self.cols);
        for (&(i, j), p) in &self.entries {
            m.set(i, j, p.evaluate(point));
        }
        m
    }

    pub fn evaluate_int(&self, point: &[BigInt]) -> RationalMatrix {
        let q: Vec<BigRational> = point.iter().map(|v| BigRational::from_integer(v.clone())).collect();
        self.evaluate(&q)
    }

    pub fn transpose(&self) -> PolyMatrix {
        let entries = self.entries.iter().map(|(&(i, j), p)| ((j, i), p.clone())).collect();
        PolyMatrix { rows: self.cols, cols: self.rows, nvars: self.nvars, degree: self.degree, entries }
    }

    /// Matrix product; entry degrees add.
    pub fn matmul(&self, other: &PolyMatrix) -> Result<PolyMatrix> {
        if self.cols != other.rows {
            return Err(Error::input("matrix product dimension mismatch"));
        }
        let mut out: BTreeMap<(usize, usize), DualPolynomial> = BTreeMap::new();
        for (&(i, k), p) in &self.entries {
            for (&(k2, j), q) in other.entries.range((k, 0)..(k + 1, 0)) {
                debug_assert_eq!(k, k2);
                let prod = p * q;
                let slot = out.entry((i, j)).or_insert_with(|| DualPolynomial::zero(self.nvars));
                *slot = &*slot + &prod;
            }
        }
        PolyMatrix::new(self.rows, other.cols, self.nvars, out)
    }

    fn to_dense(&self) -> Vec<Vec<DualPolynomial>> {
        let mut out = vec![vec![DualPolynomial::zero(self.nvars); self.cols]; self.rows];
        for (&(i, j), p) in &self.entries {
            out[i][j] = p.clone();
        }
        out
    }
}

/// Symbolic determinant by Bareiss elimination over the polynomial ring.
pub fn symbolic_det(m: &PolyMatrix) -> Result<DualPolynomial> {
    symbolic_det_capped(m, SYMBOLIC_DET_CAP)
}

pub fn symbolic_det_capped(m: &PolyMatrix, cap: usize) -> Result<DualPolynomial> {
    if !m.is_square() {
        return Err(Error::input(format!("determinant of a {}x{} matrix", m.rows(), m.cols())));
    }
    if m.rows() > cap {
        return Err(Error::capacity(format!(
            "symbolic determinant of dimension {} exceeds cap {}; use is_det_nonzero",
            m.rows(),
            cap
        )));
    }
    let n = m.nvars();
    Ok(bareiss_det(m.to_dense(), DualPolynomial::zero(n), DualPolynomial::one(n)))
}

/// Parameters and outcome of a randomized determinant test.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PitCertificate {
    pub degree_bound: u64,
    pub sample_bound: i64,
    pub samples: u32,
    pub seed: u64,
    pub failure_probability: f64,
    /// Integer point where the evaluated matrix was nonsingular.
    pub witness: Option<Vec<i64>>,
    pub points_tried: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PitOutcome {
    pub nonzero: bool,
    pub certificate: PitCertificate,
}

/// Schwartz–Zippel sampling parameters for a polynomial of degree at most
/// `degree_bound` and a target failure probability.
pub fn sampling_parameters(degree_bound: u64, confidence: f64) -> (i64, u32, f64) {
    let d = degree_bound.max(1);
    let bound = (d as i64).saturating_mul(1 << 20);
    let ratio = d as f64 / (2.0 * bound as f64 + 1.0);
    let samples = (confidence.ln() / ratio.ln()).ceil().max(1.0) as u32;
    (bound, samples, ratio.powi(samples as i32))
}

/// Points tried before the random samples: unit vectors, then all ones.
pub fn structured_points(n: usize) -> Vec<Vec<i64>> {
    let mut pts: Vec<Vec<i64>> = (0..n)
        .map(|i| {
            let mut p = vec![0; n];
            p[i] = 1;
            p
        })
        .collect();
    if n > 1 {
        pts.push(vec![1; n]);
    }
    pts
}

pub fn random_point(rng: &mut ChaCha8Rng, n: usize, bound: i64) -> Vec<i64> {
    (0..n).map(|_| rng.gen_range(-bound..=bound)).collect()
}

/// Decides whether `det(m)` is not identically zero.
///
/// A `true` answer comes with an integer witness point and is always
/// correct. A `false` answer is wrong with probability at most `confidence`.
pub fn is_det_nonzero(m: &PolyMatrix, confidence: f64, seed: u64) -> Result<PitOutcome> {
    if !m.is_square() {
        return Err(Error::input(format!("determinant of a {}x{} matrix", m.rows(), m.cols())));
    }
    if !(confidence > 0.0 && confidence < 1.0) {
        return Err(Error::input("confidence must lie in (0,1)"));
    }
    let degree_bound = m.rows() as u64 * m.degree() as u64;
    let (bound, samples, prob) = sampling_parameters(degree_bound, confidence);
    let mut cert = PitCertificate {
        degree_bound,
        sample_bound: bound,
        samples,
        seed,
        failure_probability: prob,
        witness: None,
        points_tried: 0,
    };
    let nonsingular_at = |p: &[i64]| {
        let pt: Vec<BigInt> = p.iter().map(|&v| BigInt::from(v)).collect();
        is_nonsingular(&m.evaluate_int(&pt))
    };
    for p in structured_points(m.nvars()) {
        cert.points_tried += 1;
        if nonsingular_at(&p) {
            cert.witness = Some(p);
            return Ok(PitOutcome { nonzero: true, certificate: cert });
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let p = random_point(&mut rng, m.nvars(), bound);
        cert.points_tried += 1;
        if nonsingular_at(&p) {
            cert.witness = Some(p);
            return Ok(PitOutcome { nonzero: true, certificate: cert });
        }
    }
    Ok(PitOutcome { nonzero: false, certificate: cert })
}

pub fn abs_bits(v: &BigRational) -> u64 {
    v.numer().abs().bits() + v.denom().bits()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::rational;

    fn poly(s: &str, n: usize) -> DualPolynomial {
        DualPolynomial::parse_with_vars(s, n).unwrap()
    }

    #[test]
    fn row_echelon_tracks_span() {
        let mut e = RowEchelon::new();
        assert!(e.insert(&[(0, rational(2)), (2, rational(4))]));
        assert!(!e.insert(&[(0, rational(1)), (2, rational(2))]));
        assert!(e.insert(&[(0, rational(1)), (1, rational(1))]));
        assert!(!e.insert(&[(1, rational(3)), (2, rational(-6))]));
        assert!(!e.insert(&[]));
        assert_eq!(e.rank(), 2);
    }

    #[test]
    fn solve_in_span_examples() {
        let basis = RationalMatrix::from_ints(&[vec![1, 0, 1], vec![0, 1, 1]]);
        let targets = RationalMatrix::from_ints(&[vec![2, 3, 5], vec![0, 0, 0]]);
        let c = solve_in_row_span(&basis, &targets).unwrap();
        assert_eq!(c.to_dense(), RationalMatrix::from_ints(&[vec![2, 3], vec![0, 0]]).to_dense());
        let outside = RationalMatrix::from_ints(&[vec![0, 0, 1]]);
        assert!(solve_in_row_span(&basis, &outside).is_none());
        assert!(rank_at_least(&basis, 2));
        assert!(!rank_at_least(&basis, 3));
    }

    #[test]
    fn trivial_ranks() {
        assert_eq!(rank(&RationalMatrix::identity(2)), 2);
        assert_eq!(rank(&RationalMatrix::zeros(3, 4)), 0);
        assert_eq!(rank(&RationalMatrix::from_ints(&[vec![1, 2, 3], vec![2, 4, 6], vec![1, 0, 1]])), 2);
    }

    #[test]
    fn sparse_path_handles_cycles() {
        // rows e0-e1, e1-e2, e2-e0 are dependent; e0+e1, e1+e2, e2+e0 are not
        let dep = RationalMatrix::from_ints(&[vec![1, -1, 0], vec![0, 1, -1], vec![-1, 0, 1]]);
        let indep = RationalMatrix::from_ints(&[vec![1, 1, 0], vec![0, 1, 1], vec![1, 0, 1]]);
        assert_eq!(rank(&dep), 2);
        assert_eq!(rank(&indep), 3);
    }

    #[test]
    fn small_determinants() {
        assert_eq!(det(&RationalMatrix::from_ints(&[vec![2]])).unwrap(), rational(2));
        assert_eq!(det(&RationalMatrix::from_ints(&[vec![0, 1], vec![1, 0]])).unwrap(), rational(-1));
        assert_eq!(det(&RationalMatrix::zeros(0, 0)).unwrap(), rational(1));
        let half = BigRational::new(1.into(), 2.into());
        let m = RationalMatrix::from_dense(&[vec![half.clone(), rational(1)], vec![rational(3), half]]);
        assert_eq!(det(&m).unwrap(), BigRational::new((-11).into(), 4.into()));
        assert!(matches!(det(&RationalMatrix::zeros(2, 3)), Err(Error::Input(_))));
    }

    #[test]
    fn symbolic_small() {
        let m = PolyMatrix::from_dense(1, vec![vec![poly("X1", 1)]]).unwrap();
        assert_eq!(symbolic_det(&m).unwrap(), poly("X1", 1));
        let m = PolyMatrix::from_dense(2, vec![vec![poly("X1", 2), poly("X2", 2)], vec![poly("X2", 2), poly("X1", 2)]])
            .unwrap();
        assert_eq!(symbolic_det(&m).unwrap(), poly("X1^2 - X2^2", 2));
        let big = PolyMatrix::new(15, 15, 1, BTreeMap::new()).unwrap();
        assert!(matches!(symbolic_det(&big), Err(Error::Capacity(_))));
        let rect = PolyMatrix::new(2, 3, 1, BTreeMap::new()).unwrap();
        assert!(matches!(symbolic_det(&rect), Err(Error::Input(_))));
    }

    #[test]
    fn inhomogeneous_entries_rejected() {
        let r = PolyMatrix::from_dense(2, vec![vec![poly("X1", 2), poly("X2^2", 2)]]);
        assert!(r.is_err());
    }

    #[test]
    fn pit_examples() {
        let x = poly("X1", 1);
        let m = PolyMatrix::from_dense(1, vec![vec![x.clone(), x.clone()], vec![x.clone(), x.clone()]]).unwrap();
        let out = is_det_nonzero(&m, 1e-9, 7).unwrap();
        assert!(!out.nonzero);
        assert!(out.certificate.failure_probability <= 1e-9);
        let m = PolyMatrix::from_dense(1, vec![vec![x]]).unwrap();
        let out = is_det_nonzero(&m, 1e-9, 7).unwrap();
        assert!(out.nonzero);
        assert_eq!(out.certificate.witness, Some(vec![1]));
    }

    #[test]
    fn sampling_meets_target() {
        for (d, c) in [(1u64, 0.5), (12, 1e-6), (500, 1e-12)] {
            let (b, k, p) = sampling_parameters(d, c);
            assert!(b >= d as i64 * (1 << 20));
            assert!(p <= c);
            assert!(k >= 1);
        }
    }
}
