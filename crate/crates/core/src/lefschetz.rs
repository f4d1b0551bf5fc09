//! Weak and strong Lefschetz properties of `A_F`.
//!
//! Two routes are provided: the direct rank of multiplication maps
//! `×ℓ^k: A_s → A_{s+k}`, and mixed Hessians evaluated at the coordinates of
//! `ℓ`. Ranks of multiplication maps are computed from the images
//! `u ∘ (ℓ^k ∘ F)` for `u` in a monomial basis of `A_s`, which determine the
//! class of `u ℓ^k` in `A_{s+k}`.
//!
//! Failure certificates rely on a torus symmetry. When all exponent
//! differences of the terms of `F` are multiples of one vector `γ`, the
//! scalings `X_i ↦ t_i X_i` with `t^γ = 1` fix `F` up to a constant and move
//! `ℓ_a` to `ℓ_{t·a}` without changing any rank. Their orbits through the
//! line `(1,…,1,λ,1,…,1)` (`λ` in a coordinate where `γ` is nonzero) are
//! dense, so the generic rank equals the rank over `Q(λ)` on that line, and
//! maximal minors of degree at most `D` vanish identically once they vanish at
//! `D + 1` values of `λ`. For a monomial the orbit of the all-ones point is
//! already dense. Other generators fall back to symbolic determinants of
//! Hessians under a dimension cap.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::apolarity::{GorensteinAlgebra, GradedBasis};
use crate::error::{Error, Result};
use crate::exactla::{
    has_full_rank, random_point, rank_below, sampling_parameters, solve_in_row_span, structured_points,
    symbolic_det_capped, PitCertificate, PolyMatrix, RationalMatrix, SYMBOLIC_DET_CAP,
};
use crate::polyring::{diff_monomial, monomials_of_degree, DualPolynomial, Monomial, OperatorPolynomial};

/// Default bound on the probability that a FAST failure verdict is wrong.
pub const DEFAULT_CONFIDENCE: f64 = 1e-12;

/// `ℓ = a_1 x_1 + … + a_n x_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearForm {
    coefficients: Vec<BigRational>,
}

impl LinearForm {
    pub fn new(coefficients: Vec<BigRational>) -> Self {
        LinearForm { coefficients }
    }

    pub fn from_ints(c: &[i64]) -> Self {
        LinearForm::new(c.iter().map(|&v| BigRational::from_integer(v.into())).collect())
    }

    pub fn var(n: usize, i: usize) -> Self {
        let mut c = vec![0; n];
        c[i] = 1;
        LinearForm::from_ints(&c)
    }

    pub fn all_ones(n: usize) -> Self {
        LinearForm::from_ints(&vec![1; n])
    }

    /// Comma-separated coefficients, e.g. `1,0,-2/3`.
    pub fn parse(s: &str) -> Result<Self> {
        let c = s
            .split(',')
            .map(|p| p.trim().parse::<BigRational>().map_err(|_| Error::input(format!("bad coefficient `{}`", p.trim()))))
            .collect::<Result<Vec<_>>>()?;
        Ok(LinearForm::new(c))
    }

    pub fn nvars(&self) -> usize {
        self.coefficients.len()
    }

    pub fn coefficients(&self) -> &[BigRational] {
        &self.coefficients
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.iter().all(Zero::is_zero)
    }

    pub fn to_operator(&self) -> OperatorPolynomial {
        let n = self.nvars();
        OperatorPolynomial::from_terms(n, self.coefficients.iter().enumerate().map(|(i, c)| (Monomial::var(n, i), c.clone())))
    }

    /// Coefficients scaled to integers; `×ℓ` and `×cℓ` have the same rank.
    fn integral(&self) -> Vec<BigInt> {
        let l = self.coefficients.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        self.coefficients.iter().map(|c| (c * &l).to_integer()).collect()
    }

    fn strings(&self) -> Vec<String> {
        self.coefficients.iter().map(ToString::to_string).collect()
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_operator())
    }
}

impl Serialize for LinearForm {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.strings().serialize(s)
    }
}

impl<'de> Deserialize<'de> for LinearForm {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        LinearForm::parse(&v.join(",")).map_err(serde::de::Error::custom)
    }
}

fn int_form(c: &[i64]) -> Vec<BigInt> {
    c.iter().map(|&v| BigInt::from(v)).collect()
}

fn form_from_bigints(c: &[BigInt]) -> LinearForm {
    LinearForm::new(c.iter().map(|v| BigRational::from_integer(v.clone())).collect())
}

/// `ℓ ∘ G` for `ℓ` with integer coefficients `c`.
fn apply_linear(c: &[BigInt], g: &DualPolynomial) -> DualPolynomial {
    let n = g.nvars();
    let mut out = DualPolynomial::zero(n);
    for (m, coef) in g.terms() {
        for (i, ci) in c.iter().enumerate() {
            let e = m.entries()[i];
            if e == 0 || ci.is_zero() {
                continue;
            }
            let mut ex = m.entries().to_vec();
            ex[i] -= 1;
            out.add_term(Monomial::new(ex), coef * BigRational::from_integer(ci * e));
        }
    }
    out
}

/// `[F, ℓ∘F, ℓ²∘F, …, ℓ^kmax∘F]`.
fn power_chain(f: &DualPolynomial, c: &[BigInt], kmax: u32) -> Vec<DualPolynomial> {
    let mut out = Vec::with_capacity(kmax as usize + 1);
    out.push(f.clone());
    for k in 0..kmax as usize {
        let next = apply_linear(c, &out[k]);
        out.push(next);
    }
    out
}

/// Rows `u ∘ G` for `u` in `basis`, in coordinates of the dual monomials of
/// degree `deg G - deg u`.
fn image_matrix(n: usize, basis: &GradedBasis, g: &DualPolynomial, target_degree: u32) -> RationalMatrix {
    let cols: std::collections::HashMap<Monomial, usize> =
        monomials_of_degree(n, target_degree).into_iter().enumerate().map(|(i, m)| (m, i)).collect();
    let mut m = RationalMatrix::zeros(basis.len(), cols.len());
    for (i, u) in basis.monomials.iter().enumerate() {
        for (mono, c) in diff_monomial(u, g).terms() {
            m.set(i, cols[mono], c.clone());
        }
    }
    m
}

/// One multiplication map `×ℓ^power: A_source → A_target` that missed
/// maximal rank.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FailingMap {
    pub source_degree: u32,
    pub target_degree: u32,
    pub power: u32,
    /// Largest rank observed at the tested forms.
    pub rank: usize,
    pub expected: usize,
}

fn map_target(alg: &GorensteinAlgebra, s: u32, k: u32) -> usize {
    alg.h(s).min(alg.h(s + k))
}

/// Rank of `×ℓ^k: A_s → A_{s+k}` from `G = ℓ^k ∘ F` if below the maximum.
fn map_deficiency(alg: &GorensteinAlgebra, s: u32, k: u32, g: &DualPolynomial) -> Option<usize> {
    let d = alg.socle_degree();
    let m = image_matrix(alg.nvars(), alg.basis(s), g, d - s - k);
    rank_below(&m, map_target(alg, s, k))
}

fn check_nvars(alg: &GorensteinAlgebra, ell: &LinearForm) -> Result<()> {
    if ell.nvars() != alg.nvars() {
        return Err(Error::input(format!("linear form has {} coefficients, expected {}", ell.nvars(), alg.nvars())));
    }
    Ok(())
}

/// Exact rank of `×ℓ^k: A_s → A_{s+k}`.
pub fn mult_map_rank(alg: &GorensteinAlgebra, ell: &LinearForm, s: u32, k: u32) -> Result<usize> {
    check_nvars(alg, ell)?;
    let d = alg.socle_degree();
    if s + k > d {
        return Err(Error::input(format!("degree {} exceeds socle degree {}", s + k, d)));
    }
    let g = power_chain(alg.integral_generator(), &ell.integral(), k).pop().expect("nonempty");
    Ok(crate::exactla::rank(&image_matrix(alg.nvars(), alg.basis(s), &g, d - s - k)))
}

/// Matrix of `×ℓ^k: A_s → A_{s+k}` in the graded bases: column `j` holds the
/// coordinates of `u_j ℓ^k` in the codomain basis.
pub fn mult_map_matrix(f: &DualPolynomial, ell: &LinearForm, s: u32, k: u32) -> Result<RationalMatrix> {
    let alg = GorensteinAlgebra::new(f)?;
    mult_map_matrix_in(&alg, ell, s, k)
}

pub fn mult_map_matrix_in(alg: &GorensteinAlgebra, ell: &LinearForm, s: u32, k: u32) -> Result<RationalMatrix> {
    check_nvars(alg, ell)?;
    if k == 0 {
        return Err(Error::input("power of the linear form must be positive"));
    }
    let d = alg.socle_degree();
    if s + k > d {
        return Err(Error::input(format!("degree {} exceeds socle degree {}", s + k, d)));
    }
    let n = alg.nvars();
    let f = alg.generator();
    let target = d - s - k;
    let codomain = image_matrix(n, alg.basis(s + k), f, target);
    let lk = ell.to_operator().pow(k);
    let domain = alg.basis(s);
    let cols: std::collections::HashMap<Monomial, usize> =
        monomials_of_degree(n, target).into_iter().enumerate().map(|(i, m)| (m, i)).collect();
    let mut images = RationalMatrix::zeros(domain.len(), cols.len());
    for (i, u) in domain.monomials.iter().enumerate() {
        let p = lk.mul_monomial(u);
        for (alpha, c) in p.terms() {
            for (mono, v) in diff_monomial(alpha, f).terms() {
                let j = cols[mono];
                images.set(i, j, images.get(i, j) + c * v);
            }
        }
    }
    let coords = solve_in_row_span(&codomain, &images)
        .ok_or_else(|| Error::Verification("image lies outside the codomain span".into()))?;
    Ok(coords.transpose())
}

/// Source degree of the single map that decides weak Lefschetz elements.
fn wlp_source(d: u32) -> Option<u32> {
    (d > 0).then(|| (d - 1) / 2)
}

fn wl_failure(alg: &GorensteinAlgebra, c: &[BigInt]) -> Option<FailingMap> {
    let s = wlp_source(alg.socle_degree())?;
    let g = apply_linear(c, alg.integral_generator());
    map_deficiency(alg, s, 1, &g).map(|rank| FailingMap {
        source_degree: s,
        target_degree: s + 1,
        power: 1,
        rank,
        expected: map_target(alg, s, 1),
    })
}

/// Failing maps `×ℓ^{d-2t}: A_t → A_{d-t}` among the degrees `ts`.
fn sl_failures(alg: &GorensteinAlgebra, c: &[BigInt], ts: &[u32]) -> Vec<FailingMap> {
    let d = alg.socle_degree();
    let Some(kmax) = ts.iter().map(|&t| d - 2 * t).max() else {
        return Vec::new();
    };
    let chain = power_chain(alg.integral_generator(), c, kmax);
    ts.iter()
        .filter_map(|&t| {
            let k = d - 2 * t;
            map_deficiency(alg, t, k, &chain[k as usize]).map(|rank| FailingMap {
                source_degree: t,
                target_degree: d - t,
                power: k,
                rank,
                expected: alg.h(t),
            })
        })
        .collect()
}

/// Degrees `t` with a nontrivial strong Lefschetz map `A_t → A_{d-t}`.
fn sl_degrees(d: u32) -> Vec<u32> {
    (0..=d / 2).filter(|&t| d > 2 * t).collect()
}

pub fn is_wl_element(f: &DualPolynomial, ell: &LinearForm) -> Result<bool> {
    is_wl_element_in(&GorensteinAlgebra::new(f)?, ell)
}

/// `ℓ` is a weak Lefschetz element iff `×ℓ: A_s → A_{s+1}` has maximal rank
/// at `s = ⌊(d-1)/2⌋`.
pub fn is_wl_element_in(alg: &GorensteinAlgebra, ell: &LinearForm) -> Result<bool> {
    check_nvars(alg, ell)?;
    Ok(wl_failure(alg, &ell.integral()).is_none())
}

pub fn is_sl_element(f: &DualPolynomial, ell: &LinearForm) -> Result<bool> {
    is_sl_element_in(&GorensteinAlgebra::new(f)?, ell)
}

/// `ℓ` is a strong Lefschetz element iff every `×ℓ^{d-2t}: A_t → A_{d-t}` is
/// bijective.
pub fn is_sl_element_in(alg: &GorensteinAlgebra, ell: &LinearForm) -> Result<bool> {
    check_nvars(alg, ell)?;
    let c = ell.integral();
    let d = alg.socle_degree();
    let chain = power_chain(alg.integral_generator(), &c, d);
    Ok(sl_degrees(d).into_iter().all(|t| map_deficiency(alg, t, d - 2 * t, &chain[(d - 2 * t) as usize]).is_none()))
}

/// Matrix `((w_i u_j) ∘ F)` with `w_i` running over the degree-`t` basis
/// (rows) and `u_j` over the degree-`s` basis (columns).
#[derive(Clone, Debug)]
pub struct HessianMatrix {
    pub s: u32,
    pub t: u32,
    pub row_basis: GradedBasis,
    pub col_basis: GradedBasis,
    pub matrix: PolyMatrix,
}

impl HessianMatrix {
    /// Degree of every entry, `d - s - t`.
    pub fn entry_degree(&self, socle_degree: u32) -> u32 {
        socle_degree - self.s - self.t
    }
}

pub fn hessian(f: &DualPolynomial, t: u32) -> Result<HessianMatrix> {
    mixed_hessian(f, t, t)
}

pub fn mixed_hessian(f: &DualPolynomial, s: u32, t: u32) -> Result<HessianMatrix> {
    mixed_hessian_in(&GorensteinAlgebra::new(f)?, s, t)
}

pub fn mixed_hessian_in(alg: &GorensteinAlgebra, s: u32, t: u32) -> Result<HessianMatrix> {
    let d = alg.socle_degree();
    if s + t > d {
        return Err(Error::input(format!("mixed Hessian degrees {} + {} exceed socle degree {}", s, t, d)));
    }
    let rows = alg.basis(t).clone();
    let cols = alg.basis(s).clone();
    let f = alg.generator();
    let mut entries = std::collections::BTreeMap::new();
    for (i, w) in rows.monomials.iter().enumerate() {
        for (j, u) in cols.monomials.iter().enumerate() {
            let e = diff_monomial(&w.mul(u), f);
            if !e.is_zero() {
                entries.insert((i, j), e);
            }
        }
    }
    let matrix = PolyMatrix::new(rows.len(), cols.len(), alg.nvars(), entries)?;
    Ok(HessianMatrix { s, t, row_basis: rows, col_basis: cols, matrix })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Property {
    #[serde(rename = "WLP")]
    Wlp,
    #[serde(rename = "SLP")]
    Slp,
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Property::Wlp => "WLP",
            Property::Slp => "SLP",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Holds,
    Fails,
    Unknown,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Holds => "HOLDS",
            Status::Fails => "FAILS",
            Status::Unknown => "UNKNOWN",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Provenance {
    /// Maximal rank verified exactly for this form.
    OracleWitness { ell: LinearForm },
    /// The evaluated Hessian has full rank at this point.
    HessianWitness { point: Vec<String> },
    /// The determinant (or Gram determinant `det(H^T H)` for a rectangular
    /// `H`) vanishes identically.
    SymbolicZero { rows: usize, cols: usize, gram: bool },
    /// Rank deficiency at `points` values of `λ` on the line through
    /// all-ones with `λ` in coordinate `coordinate`, against minors of degree
    /// at most `degree_bound`.
    InterpolationZero { coordinate: usize, points: usize, degree_bound: u64 },
    /// Deficiency at the all-ones point of a monomial generator.
    DenseOrbit { point: Vec<i64> },
    ProbabilisticZero { certificate: PitCertificate, prime: u64 },
    /// No conclusion at the requested point.
    Inconclusive { point: Vec<String> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub property: Property,
    pub status: Status,
    pub provenance: Provenance,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub detail: Vec<FailingMap>,
}

impl Verdict {
    pub fn holds(&self) -> bool {
        self.status == Status::Holds
    }

    pub fn fails(&self) -> bool {
        self.status == Status::Fails
    }

    /// A FAILS verdict backed by an exact argument.
    pub fn is_certified_failure(&self) -> bool {
        self.fails()
            && matches!(
                self.provenance,
                Provenance::SymbolicZero { .. } | Provenance::InterpolationZero { .. } | Provenance::DenseOrbit { .. }
            )
    }

    fn witness(property: Property, ell: LinearForm) -> Self {
        Verdict { property, status: Status::Holds, provenance: Provenance::OracleWitness { ell }, detail: Vec::new() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Mode {
    Fast,
    Certify,
}

#[derive(Clone, Copy, Debug)]
pub struct DecideOptions {
    pub mode: Mode,
    pub seed: u64,
    /// Bound on the error probability of an uncertified failure.
    pub confidence: f64,
    /// Largest dimension for symbolic determinant certificates.
    pub symbolic_cap: usize,
}

impl DecideOptions {
    pub fn new(mode: Mode, seed: u64) -> Self {
        DecideOptions { mode, seed, confidence: DEFAULT_CONFIDENCE, symbolic_cap: SYMBOLIC_DET_CAP }
    }
}

impl Default for DecideOptions {
    fn default() -> Self {
        DecideOptions::new(Mode::Fast, 0)
    }
}

/// How to reach the generic rank of a multiplication map from special forms.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum GenericSlice {
    /// Monomial generator: the all-ones form is generic.
    Point,
    /// Exponent differences span a line; vary this coordinate.
    Line(usize),
    None,
}

fn generic_slice(f: &DualPolynomial) -> GenericSlice {
    let exps: Vec<Vec<i64>> = f.terms().map(|(m, _)| m.entries().iter().map(|&e| e as i64).collect()).collect();
    let base = &exps[0];
    let diffs: Vec<Vec<i64>> = exps[1..].iter().map(|e| e.iter().zip(base).map(|(a, b)| a - b).collect()).collect();
    let Some(gamma) = diffs.first() else {
        return GenericSlice::Point;
    };
    let parallel = diffs.iter().all(|delta| {
        (0..gamma.len()).all(|i| (0..gamma.len()).all(|j| delta[i] * gamma[j] == delta[j] * gamma[i]))
    });
    if !parallel {
        return GenericSlice::None;
    }
    let j = gamma.iter().position(|&g| g != 0).expect("distinct terms");
    GenericSlice::Line(j)
}

fn line_point(n: usize, j: usize, lambda: i64) -> Vec<BigInt> {
    let mut p = vec![BigInt::one(); n];
    p[j] = BigInt::from(lambda);
    p
}

/// Probes forms for one target: structured points, then Schwartz–Zippel
/// samples. `probe` returns `None` at a witness, otherwise the failing maps.
struct Search {
    witness: Option<Vec<BigInt>>,
    certificate: PitCertificate,
}

fn search_forms(
    n: usize,
    degree_bound: u64,
    opts: &DecideOptions,
    mut probe: impl FnMut(&[BigInt]) -> Option<Vec<FailingMap>>,
    failures: &mut Vec<FailingMap>,
) -> Search {
    let (bound, samples, prob) = sampling_parameters(degree_bound, opts.confidence);
    let mut certificate = PitCertificate {
        degree_bound,
        sample_bound: bound,
        samples,
        seed: opts.seed,
        failure_probability: prob,
        witness: None,
        points_tried: 0,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let structured = structured_points(n);
    let mut tried = 0;
    let points = structured.into_iter().map(Some).chain((0..samples).map(|_| None));
    for p in points {
        let p = p.unwrap_or_else(|| random_point(&mut rng, n, bound));
        tried += 1;
        certificate.points_tried = tried;
        let c = int_form(&p);
        match probe(&c) {
            None => {
                certificate.witness = Some(p);
                return Search { witness: Some(c), certificate };
            }
            Some(fs) => merge_failures(failures, fs, tried == 1),
        }
    }
    Search { witness: None, certificate }
}

/// Keeps the maps that failed at every form tried so far, with the largest
/// rank observed for each.
fn merge_failures(acc: &mut Vec<FailingMap>, new: Vec<FailingMap>, first: bool) {
    if first {
        *acc = new;
    } else {
        acc.retain_mut(|g| match new.iter().find(|f| f.source_degree == g.source_degree && f.power == g.power) {
            Some(f) => {
                g.rank = g.rank.max(f.rank);
                true
            }
            None => false,
        });
    }
    acc.sort_by_key(|f| f.source_degree);
}

pub fn decide_wlp(f: &DualPolynomial, mode: Mode) -> Result<Verdict> {
    decide_wlp_in(&GorensteinAlgebra::new(f)?, &DecideOptions::new(mode, 0))
}

pub fn decide_slp(f: &DualPolynomial, mode: Mode) -> Result<Verdict> {
    decide_slp_in(&GorensteinAlgebra::new(f)?, &DecideOptions::new(mode, 0))
}

/// Decides the WLP. HOLDS verdicts carry a form whose map was verified to
/// have maximal rank. FAST failures are probabilistic; CERTIFY proves
/// failures or returns a capacity error.
pub fn decide_wlp_in(alg: &GorensteinAlgebra, opts: &DecideOptions) -> Result<Verdict> {
    let n = alg.nvars();
    let d = alg.socle_degree();
    let Some(s) = wlp_source(d) else {
        return Ok(Verdict::witness(Property::Wlp, LinearForm::var(n, 0)));
    };
    let rho = map_target(alg, s, 1);
    let mut failures = Vec::new();
    let search = search_forms(n, rho as u64, opts, |c| wl_failure(alg, c).map(|f| vec![f]), &mut failures);
    if let Some(c) = search.witness {
        return Ok(Verdict::witness(Property::Wlp, form_from_bigints(&c)));
    }
    if opts.mode == Mode::Fast {
        return Ok(probabilistic_failure(Property::Wlp, search.certificate, failures));
    }
    let slice = generic_slice(alg.generator());
    match certify_map(alg, s, 1, slice, || wlp_symbolic(alg, s, opts))? {
        MapCertificate::Deficient(provenance) => {
            Ok(Verdict { property: Property::Wlp, status: Status::Fails, provenance, detail: failures })
        }
        MapCertificate::Generic(Some(c)) => Ok(Verdict::witness(Property::Wlp, form_from_bigints(&c))),
        MapCertificate::Generic(None) => wlp_retry(alg, opts, rho as u64),
    }
}

/// Decides the SLP through the maps `×ℓ^{d-2t}: A_t → A_{d-t}`. A certified
/// failure names the degrees `t` whose map is generically singular.
pub fn decide_slp_in(alg: &GorensteinAlgebra, opts: &DecideOptions) -> Result<Verdict> {
    let n = alg.nvars();
    let d = alg.socle_degree();
    let ts = sl_degrees(d);
    let degree_bound: u64 = ts.iter().map(|&t| alg.h(t) as u64 * (d - 2 * t) as u64).sum();
    let mut failures = Vec::new();
    let search = search_forms(
        n,
        degree_bound,
        opts,
        |c| {
            let fs = sl_failures(alg, c, &ts);
            (!fs.is_empty()).then_some(fs)
        },
        &mut failures,
    );
    if let Some(c) = search.witness {
        return Ok(Verdict::witness(Property::Slp, form_from_bigints(&c)));
    }
    if opts.mode == Mode::Fast {
        return Ok(probabilistic_failure(Property::Slp, search.certificate, failures));
    }
    let slice = generic_slice(alg.generator());
    let mut certified = Vec::new();
    let mut provenance = None;
    for t in failures.iter().map(|f| f.source_degree).collect::<Vec<_>>() {
        let k = d - 2 * t;
        match certify_map(alg, t, k, slice, || slp_symbolic(alg, t, opts))? {
            MapCertificate::Deficient(p) => {
                certified.push(failures.iter().find(|f| f.source_degree == t).expect("listed").clone());
                provenance.get_or_insert(p);
            }
            MapCertificate::Generic(_) => {}
        }
    }
    if let Some(provenance) = provenance {
        return Ok(Verdict { property: Property::Slp, status: Status::Fails, provenance, detail: certified });
    }
    // Every map is generically bijective, so a generic form works for all of
    // them at once; keep sampling with fresh seeds.
    for round in 1..=8u64 {
        let retry = DecideOptions { seed: reseed(opts.seed, round), ..*opts };
        let mut ignored = Vec::new();
        let search = search_forms(
            n,
            degree_bound,
            &retry,
            |c| {
                let fs = sl_failures(alg, c, &ts);
                (!fs.is_empty()).then_some(fs)
            },
            &mut ignored,
        );
        if let Some(c) = search.witness {
            return Ok(Verdict::witness(Property::Slp, form_from_bigints(&c)));
        }
    }
    Ok(Verdict {
        property: Property::Slp,
        status: Status::Unknown,
        provenance: Provenance::ProbabilisticZero { certificate: search.certificate, prime: crate::exactla::modp::P },
        detail: failures,
    })
}

/// The map is generically of maximal rank but sampling missed; retry with
/// fresh seeds before giving up.
fn wlp_retry(alg: &GorensteinAlgebra, opts: &DecideOptions, degree_bound: u64) -> Result<Verdict> {
    let mut last = None;
    for round in 1..=8u64 {
        let retry = DecideOptions { seed: reseed(opts.seed, round), ..*opts };
        let search = search_forms(alg.nvars(), degree_bound, &retry, |c| wl_failure(alg, c).map(|f| vec![f]), &mut Vec::new());
        if let Some(c) = search.witness {
            return Ok(Verdict::witness(Property::Wlp, form_from_bigints(&c)));
        }
        last = Some(search.certificate);
    }
    Ok(Verdict {
        property: Property::Wlp,
        status: Status::Unknown,
        provenance: Provenance::ProbabilisticZero { certificate: last.expect("ran"), prime: crate::exactla::modp::P },
        detail: Vec::new(),
    })
}

fn reseed(seed: u64, round: u64) -> u64 {
    seed.wrapping_add(round.wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

fn probabilistic_failure(property: Property, certificate: PitCertificate, detail: Vec<FailingMap>) -> Verdict {
    Verdict {
        property,
        status: Status::Fails,
        provenance: Provenance::ProbabilisticZero { certificate, prime: crate::exactla::modp::P },
        detail,
    }
}

enum MapCertificate {
    Deficient(Provenance),
    /// Generically of maximal rank, with a witness form when one was met.
    Generic(Option<Vec<BigInt>>),
}

/// Proves that `×ℓ^k: A_s → A_{s+k}` has deficient rank for generic `ℓ`, or
/// finds a form where it does not.
fn certify_map(
    alg: &GorensteinAlgebra,
    s: u32,
    k: u32,
    slice: GenericSlice,
    symbolic: impl FnOnce() -> Result<Option<Provenance>>,
) -> Result<MapCertificate> {
    let n = alg.nvars();
    let rank_fails = |c: &[BigInt]| {
        let g = power_chain(alg.integral_generator(), c, k).pop().expect("nonempty");
        map_deficiency(alg, s, k, &g).is_some()
    };
    match slice {
        GenericSlice::Point => {
            let ones = vec![BigInt::one(); n];
            if rank_fails(&ones) {
                Ok(MapCertificate::Deficient(Provenance::DenseOrbit { point: vec![1; n] }))
            } else {
                Ok(MapCertificate::Generic(Some(ones)))
            }
        }
        GenericSlice::Line(j) => {
            let degree_bound = map_target(alg, s, k) as u64 * k as u64;
            let points = degree_bound as usize + 1;
            for lambda in 0..points as i64 {
                let p = line_point(n, j, lambda);
                if !rank_fails(&p) {
                    return Ok(MapCertificate::Generic(Some(p)));
                }
            }
            Ok(MapCertificate::Deficient(Provenance::InterpolationZero { coordinate: j, points, degree_bound }))
        }
        GenericSlice::None => Ok(match symbolic()? {
            Some(p) => MapCertificate::Deficient(p),
            None => MapCertificate::Generic(None),
        }),
    }
}

/// Symbolic certificate for the WLP map through the mixed Hessian; `None`
/// when the determinant does not vanish.
fn wlp_symbolic(alg: &GorensteinAlgebra, s: u32, opts: &DecideOptions) -> Result<Option<Provenance>> {
    let d = alg.socle_degree();
    let t = d - s - 1;
    let h = mixed_hessian_in(alg, s, t)?.matrix;
    symbolic_zero(&h, opts.symbolic_cap)
}

fn slp_symbolic(alg: &GorensteinAlgebra, t: u32, opts: &DecideOptions) -> Result<Option<Provenance>> {
    let h = mixed_hessian_in(alg, t, t)?.matrix;
    symbolic_zero(&h, opts.symbolic_cap)
}

/// Over `Q(a)`, a formally real field, `rank(H^T H) = rank(H)`, so a
/// rectangular `H` lacks full rank iff its Gram determinant vanishes.
fn symbolic_zero(h: &PolyMatrix, cap: usize) -> Result<Option<Provenance>> {
    let (rows, cols) = (h.rows(), h.cols());
    let gram = rows != cols;
    let square = if rows > cols {
        h.transpose().matmul(h)?
    } else if rows < cols {
        h.matmul(&h.transpose())?
    } else {
        h.clone()
    };
    if square.rows() > cap {
        return Err(Error::capacity(format!("symbolic determinant of dimension {} exceeds cap {}", square.rows(), cap)));
    }
    let det = symbolic_det_capped(&square, cap)?;
    Ok(det.is_zero().then_some(Provenance::SymbolicZero { rows, cols, gram }))
}

/// WLP through the mixed Hessian `(d - t - 1, t)` with `t = ⌊d/2⌋`.
///
/// At a given point, a full-rank evaluation gives HOLDS and anything else is
/// inconclusive. Without a point, structured and random points are tried;
/// failing all of them gives a probabilistic FAILS.
pub fn wlp_by_hessian(alg: &GorensteinAlgebra, point: Option<&[BigRational]>, opts: &DecideOptions) -> Result<Verdict> {
    let n = alg.nvars();
    let d = alg.socle_degree();
    let strings = |p: &[BigRational]| p.iter().map(ToString::to_string).collect::<Vec<_>>();
    if d == 0 {
        let ones = vec![BigRational::one(); n];
        return Ok(Verdict {
            property: Property::Wlp,
            status: Status::Holds,
            provenance: Provenance::HessianWitness { point: strings(&ones) },
            detail: Vec::new(),
        });
    }
    let t = d / 2;
    let s = d - t - 1;
    let h = mixed_hessian_in(alg, s, t)?.matrix;
    let holds = |p: &[BigRational]| has_full_rank(&h.evaluate(p));
    let failing = || FailingMap {
        source_degree: s,
        target_degree: s + 1,
        power: 1,
        rank: 0,
        expected: h.rows().min(h.cols()),
    };
    if let Some(p) = point {
        if p.len() != n {
            return Err(Error::input(format!("point has {} coordinates, expected {}", p.len(), n)));
        }
        let (status, provenance) = if holds(p) {
            (Status::Holds, Provenance::HessianWitness { point: strings(p) })
        } else {
            (Status::Unknown, Provenance::Inconclusive { point: strings(p) })
        };
        return Ok(Verdict { property: Property::Wlp, status, provenance, detail: Vec::new() });
    }
    let degree_bound = h.rows().min(h.cols()) as u64;
    let mut failures = Vec::new();
    let search = search_forms(
        n,
        degree_bound,
        opts,
        |c| {
            let q: Vec<BigRational> = c.iter().map(|v| BigRational::from_integer(v.clone())).collect();
            if holds(&q) {
                None
            } else {
                Some(vec![failing()])
            }
        },
        &mut failures,
    );
    match search.witness {
        Some(c) => Ok(Verdict {
            property: Property::Wlp,
            status: Status::Holds,
            provenance: Provenance::HessianWitness { point: c.iter().map(ToString::to_string).collect() },
            detail: Vec::new(),
        }),
        None => Ok(probabilistic_failure(Property::Wlp, search.certificate, failures)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::{rank, symbolic_det};
    use crate::polyring::rational;

    fn dual(s: &str) -> DualPolynomial {
        DualPolynomial::parse(s).unwrap()
    }

    const EXAMPLE: &str = "X1^8*X2^3 - X1^6*X2^2*X3^3";

    #[test]
    fn mult_map_small() {
        let m = mult_map_matrix(&dual("X1^2"), &LinearForm::from_ints(&[1]), 0, 1).unwrap();
        assert_eq!((m.rows(), m.cols()), (1, 1));
        assert!(!m.get(0, 0).is_zero());
        let m = mult_map_matrix(&dual("X1^3 - X2^3"), &LinearForm::from_ints(&[1, 1]), 1, 1).unwrap();
        assert_eq!((m.rows(), m.cols(), rank(&m)), (2, 2, 2));
        assert!(mult_map_matrix(&dual("X1^2"), &LinearForm::from_ints(&[1]), 2, 1).is_err());
        assert!(mult_map_matrix(&dual("X1^2"), &LinearForm::from_ints(&[1]), 0, 0).is_err());
    }

    #[test]
    fn mult_map_matrix_matches_oracle_rank() {
        let f = dual(EXAMPLE);
        let alg = GorensteinAlgebra::new(&f).unwrap();
        for (ell, s, k) in [([1, 0, 0], 5, 1), ([0, 0, 1], 5, 1), ([1, 2, -1], 3, 4), ([0, 1, 1], 2, 2)] {
            let ell = LinearForm::from_ints(&ell);
            let m = mult_map_matrix_in(&alg, &ell, s, k).unwrap();
            assert_eq!(rank(&m), mult_map_rank(&alg, &ell, s, k).unwrap());
        }
        let m = mult_map_matrix_in(&alg, &LinearForm::from_ints(&[1, 0, 0]), 5, 1).unwrap();
        assert_eq!((m.rows(), m.cols(), rank(&m)), (12, 12, 12));
    }

    #[test]
    fn weak_lefschetz_elements() {
        let f = dual(EXAMPLE);
        assert!(is_wl_element(&f, &LinearForm::from_ints(&[1, 0, 0])).unwrap());
        assert!(!is_wl_element(&f, &LinearForm::from_ints(&[0, 0, 1])).unwrap());
        assert!(is_wl_element(&dual("X1^7"), &LinearForm::from_ints(&[1])).unwrap());
        assert!(is_sl_element(&dual("X1^7"), &LinearForm::from_ints(&[1])).unwrap());
        assert!(is_wl_element(&f, &LinearForm::from_ints(&[1, 0])).is_err());
    }

    #[test]
    fn hessians() {
        let f = dual(EXAMPLE);
        let h0 = hessian(&f, 0).unwrap();
        assert_eq!(h0.matrix.get(0, 0), f);
        let h = hessian(&dual("X1*X2"), 1).unwrap();
        assert!(h.matrix.get(0, 0).is_zero() && h.matrix.get(1, 1).is_zero());
        assert_eq!(h.matrix.get(0, 1), DualPolynomial::constant(2, rational(1)));
        let h5 = hessian(&f, 5).unwrap();
        assert_eq!((h5.matrix.rows(), h5.matrix.cols(), h5.matrix.degree()), (12, 12, 1));
        let det = symbolic_det(&h5.matrix).unwrap();
        assert_eq!(det.len(), 1);
        assert_eq!(det.leading_term().unwrap().0, &Monomial::new(vec![12, 0, 0]));
        assert!(mixed_hessian(&f, 6, 6).is_err());
    }

    #[test]
    fn hessian_route_example() {
        let alg = GorensteinAlgebra::new(&dual(EXAMPLE)).unwrap();
        let pt = [rational(1), rational(0), rational(0)];
        let v = wlp_by_hessian(&alg, Some(&pt), &DecideOptions::default()).unwrap();
        assert!(v.holds());
        let pt = [rational(0), rational(0), rational(1)];
        assert_eq!(wlp_by_hessian(&alg, Some(&pt), &DecideOptions::default()).unwrap().status, Status::Unknown);
        assert!(wlp_by_hessian(&alg, None, &DecideOptions::default()).unwrap().holds());
        let sq = GorensteinAlgebra::new(&dual("X1^2")).unwrap();
        assert!(wlp_by_hessian(&sq, Some(&[rational(1)]), &DecideOptions::default()).unwrap().holds());
    }

    #[test]
    fn deciders_on_simple_algebras() {
        for f in ["X1^3*X2^4", "X1^5", "X1^3 - X2^3", EXAMPLE] {
            let f = dual(f);
            assert!(decide_wlp(&f, Mode::Certify).unwrap().holds(), "{}", f);
        }
        assert!(decide_slp(&dual("X1^3*X2^4"), Mode::Certify).unwrap().holds());
        assert!(decide_slp(&dual("X1^5*X2*X3 - X1^2*X2^4*X3"), Mode::Certify).unwrap().holds());
        let trivial = decide_wlp(&dual("X1^0"), Mode::Certify).unwrap();
        assert!(trivial.holds());
    }

    #[test]
    fn generic_slice_detection() {
        assert_eq!(generic_slice(&dual("X1^2*X2")), GenericSlice::Point);
        assert_eq!(generic_slice(&dual("X1^3 - X2^3")), GenericSlice::Line(0));
        assert_eq!(generic_slice(&dual("X1^3 - X2^3 + X3^3")), GenericSlice::None);
        assert_eq!(generic_slice(&dual("X1^4 - X1^2*X2^2 + X2^4")), GenericSlice::Line(0));
    }

    #[test]
    fn extra_unused_variable_keeps_wlp() {
        let f = DualPolynomial::parse_with_vars("X1^3 - X2^3", 3).unwrap();
        assert!(decide_wlp(&f, Mode::Certify).unwrap().holds());
    }

    /// Perazzo cubic: its Hessian vanishes identically, so `×ℓ: A_1 → A_2`
    /// is singular for every `ℓ`.
    #[test]
    fn perazzo_cubic_fails_wlp_with_symbolic_certificate() {
        let f = dual("X1*X4^2 + X2*X4*X5 + X3*X5^2");
        let alg = GorensteinAlgebra::new(&f).unwrap();
        assert_eq!(alg.hvector().entries(), &[1, 5, 5, 1]);
        let fast = decide_wlp_in(&alg, &DecideOptions::new(Mode::Fast, 7)).unwrap();
        assert!(fast.fails());
        assert!(matches!(fast.provenance, Provenance::ProbabilisticZero { .. }));
        let cert = decide_wlp_in(&alg, &DecideOptions::new(Mode::Certify, 7)).unwrap();
        assert!(cert.is_certified_failure());
        assert!(matches!(cert.provenance, Provenance::SymbolicZero { rows: 5, cols: 5, gram: false }));
        assert_eq!(cert.detail[0].rank, 4);
        let slp = decide_slp_in(&alg, &DecideOptions::new(Mode::Certify, 7)).unwrap();
        assert!(slp.is_certified_failure());
        let tight = DecideOptions { symbolic_cap: 3, ..DecideOptions::new(Mode::Certify, 7) };
        assert!(matches!(decide_wlp_in(&alg, &tight), Err(Error::Capacity(_))));
    }

    #[test]
    fn verdict_json_shape() {
        let v = decide_wlp(&dual(EXAMPLE), Mode::Fast).unwrap();
        let j = serde_json::to_value(&v).unwrap();
        assert_eq!(j["property"], "WLP");
        assert_eq!(j["status"], "HOLDS");
        assert_eq!(j["provenance"]["kind"], "oracle-witness");
        assert_eq!(j["provenance"]["ell"], serde_json::json!(["1", "0", "0"]));
        let back: Verdict = serde_json::from_value(j).unwrap();
        assert_eq!(back, v);
    }
}
