//! Binomial dual generators `F = X^a (X^{b_L} - X^{b_R})` and the sufficient
//! conditions for the WLP/SLP known for them.
//!
//! A spec lists the variables as a left block `1..r` and a right block
//! `r+1..n`. The positive part of `b` on each block is the support of the
//! corresponding term of the binomial factor; variables with `b_i = 0` may sit
//! in either block.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::apolarity::{annihilator_membership, sperner_stats, GorensteinAlgebra, HVector};
use crate::error::{Error, Result};
use crate::lefschetz::{decide_wlp_in, DecideOptions, LinearForm};
use crate::polyring::{diff_apply, DualPolynomial, Monomial, OperatorPolynomial};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BinomialSpec {
    pub n: usize,
    pub r: usize,
    pub a: Vec<u32>,
    pub b: Vec<u32>,
}

impl BinomialSpec {
    pub fn new(n: usize, r: usize, a: Vec<u32>, b: Vec<u32>) -> Result<Self> {
        let s = BinomialSpec { n, r, a, b };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if self.a.len() != self.n || self.b.len() != self.n {
            return Err(Error::input("exponent vectors must have length n"));
        }
        if self.r == 0 || self.r >= self.n {
            return Err(Error::input(format!("split index r = {} must satisfy 1 <= r <= n-1", self.r)));
        }
        let (left, right) = (self.left_degree(), self.right_degree());
        if left != right {
            return Err(Error::input(format!("unbalanced binomial factor: degrees {} and {}", left, right)));
        }
        if left == 0 {
            return Err(Error::input("binomial factor is zero"));
        }
        Ok(())
    }

    pub fn left_degree(&self) -> u32 {
        self.b[..self.r].iter().sum()
    }

    pub fn right_degree(&self) -> u32 {
        self.b[self.r..].iter().sum()
    }

    /// Common degree of the two terms of the binomial factor.
    pub fn factor_degree(&self) -> u32 {
        self.left_degree()
    }

    pub fn gcd_degree(&self) -> u32 {
        self.a.iter().sum()
    }

    pub fn degree(&self) -> u32 {
        self.gcd_degree() + self.factor_degree()
    }

    pub fn g(&self) -> Monomial {
        Monomial::new(self.a.clone())
    }

    pub fn m1(&self) -> Monomial {
        Monomial::new((0..self.n).map(|i| self.a[i] + if i < self.r { self.b[i] } else { 0 }).collect())
    }

    pub fn m2(&self) -> Monomial {
        Monomial::new((0..self.n).map(|i| self.a[i] + if i >= self.r { self.b[i] } else { 0 }).collect())
    }

    /// `m1 - m2`.
    pub fn polynomial(&self) -> DualPolynomial {
        let one = BigRational::one();
        DualPolynomial::from_terms(self.n, [(self.m1(), one.clone()), (self.m2(), -one)])
    }

    /// Variables in the support of the binomial factor.
    pub fn factor_support(&self) -> Vec<usize> {
        (0..self.n).filter(|&i| self.b[i] > 0).collect()
    }

    /// Dedup key `n{n}r{r}a{..}b{..}` of the canonical form.
    pub fn key(&self) -> String {
        let c = self.canonical();
        let join = |v: &[u32]| v.iter().map(u32::to_string).collect::<Vec<_>>().join(",");
        format!("n{}r{}a{}b{}", c.n, c.r, join(&c.a), join(&c.b))
    }

    pub fn parse_key(key: &str) -> Result<Self> {
        let bad = || Error::input(format!("malformed spec key `{}`", key));
        let rest = key.strip_prefix('n').ok_or_else(bad)?;
        let (n, rest) = rest.split_once('r').ok_or_else(bad)?;
        let (r, rest) = rest.split_once('a').ok_or_else(bad)?;
        let (a, b) = rest.split_once('b').ok_or_else(bad)?;
        let list = |s: &str| s.split(',').map(|v| v.parse::<u32>().map_err(|_| bad())).collect::<Result<Vec<_>>>();
        BinomialSpec::new(n.parse().map_err(|_| bad())?, r.parse().map_err(|_| bad())?, list(a)?, list(b)?)
    }

    /// Representative of the spec up to relabeling variables and swapping
    /// the two terms: blocks ordered (positive `b` on one side, positive `b`
    /// on the other side, `b = 0`), each sorted by `(b, a)` descending, with
    /// the side order that makes `(a, b)` lexicographically largest.
    pub fn canonical(&self) -> BinomialSpec {
        let sort = |mut v: Vec<(u32, u32)>| {
            v.sort_by(|x, y| y.cmp(x));
            v
        };
        let class = |pred: &dyn Fn(usize) -> bool| sort((0..self.n).filter(|&i| pred(i)).map(|i| (self.b[i], self.a[i])).collect());
        let left = class(&|i| i < self.r && self.b[i] > 0);
        let right = class(&|i| i >= self.r && self.b[i] > 0);
        let zero = class(&|i| self.b[i] == 0);
        let build = |l: &[(u32, u32)], r: &[(u32, u32)]| {
            let all: Vec<&(u32, u32)> = l.iter().chain(r).chain(&zero).collect();
            BinomialSpec {
                n: self.n,
                r: l.len(),
                a: all.iter().map(|p| p.1).collect(),
                b: all.iter().map(|p| p.0).collect(),
            }
        };
        let x = build(&left, &right);
        let y = build(&right, &left);
        if (&y.a, &y.b) > (&x.a, &x.b) {
            y
        } else {
            x
        }
    }

    /// The same binomial with the variables reordered: position `i` of the
    /// result holds variable `order[i]`, and the first `r` entries form the
    /// left block.
    fn reordered(&self, order: &[usize], r: usize) -> BinomialSpec {
        BinomialSpec {
            n: self.n,
            r,
            a: order.iter().map(|&i| self.a[i]).collect(),
            b: order.iter().map(|&i| self.b[i]).collect(),
        }
    }

    /// `F` with its terms swapped, blocks exchanged.
    fn swapped(&self) -> (BinomialSpec, Vec<usize>) {
        let order: Vec<usize> = (self.r..self.n).chain(0..self.r).collect();
        (self.reordered(&order, self.n - self.r), order)
    }
}

impl fmt::Display for BinomialSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g = DualPolynomial::from_monomial(self.g(), BigRational::one());
        let left = Monomial::new((0..self.n).map(|i| if i < self.r { self.b[i] } else { 0 }).collect());
        let right = Monomial::new((0..self.n).map(|i| if i >= self.r { self.b[i] } else { 0 }).collect());
        let fac = DualPolynomial::from_terms(self.n, [(left, BigRational::one()), (right, -BigRational::one())]);
        write!(f, "{}*({})", g, fac)
    }
}

/// Splits a two-term polynomial `m1 - m2` into its spec. The variables are
/// reordered as: support of `m1/g` by decreasing exponent (ties by original
/// index), then support of `m2/g` likewise, then the remaining variables in
/// original order. Returns the spec and `perm` with
/// `spec.polynomial() == f.permuted(&perm)`.
pub fn normalize(f: &DualPolynomial) -> Result<(BinomialSpec, Vec<usize>)> {
    let n = f.nvars();
    if f.len() != 2 {
        return Err(Error::input(format!("expected a binomial, got {} terms", f.len())));
    }
    if !f.is_homogeneous() {
        return Err(Error::input("binomial is not homogeneous"));
    }
    let terms: Vec<(&Monomial, &BigRational)> = f.terms().collect();
    let one = BigRational::one();
    let (pos, neg) = match (terms[0].1, terms[1].1) {
        (c, e) if *c == one && *e == -one.clone() => (terms[0].0, terms[1].0),
        (c, e) if *c == -one.clone() && *e == one => (terms[1].0, terms[0].0),
        (c, e) => {
            return Err(Error::UnsupportedCoefficient(format!(
                "coefficients {} and {}; only m1 - m2 is supported",
                c, e
            )))
        }
    };
    if n < 2 {
        return Err(Error::input("a binomial needs at least two variables"));
    }
    let g = pos.gcd(neg);
    let bl = pos.div(&g).expect("gcd divides");
    let br = neg.div(&g).expect("gcd divides");
    let by_exponent = |m: &Monomial| {
        let mut idx: Vec<usize> = (0..n).filter(|&i| m.entries()[i] > 0).collect();
        idx.sort_by_key(|&i| (std::cmp::Reverse(m.entries()[i]), i));
        idx
    };
    let left = by_exponent(&bl);
    let right = by_exponent(&br);
    let rest: Vec<usize> = (0..n).filter(|&i| bl.entries()[i] == 0 && br.entries()[i] == 0).collect();
    let perm: Vec<usize> = left.iter().chain(&right).chain(&rest).copied().collect();
    let r = left.len();
    let a = perm.iter().map(|&i| g.entries()[i]).collect();
    let b = perm.iter().map(|&i| bl.entries()[i] + br.entries()[i]).collect();
    Ok((BinomialSpec::new(n, r, a, b)?, perm))
}

/// Undoes the permutation returned by [`normalize`].
pub fn reconstruct(spec: &BinomialSpec, perm: &[usize]) -> DualPolynomial {
    let mut inverse = vec![0; perm.len()];
    for (i, &p) in perm.iter().enumerate() {
        inverse[p] = i;
    }
    spec.polynomial().permuted(&inverse)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TheoremId {
    #[serde(rename = "gcd-criterion")]
    GcdCriterion,
    #[serde(rename = "family4i")]
    Family4i,
    #[serde(rename = "family4ii")]
    Family4ii,
    #[serde(rename = "family2")]
    Family2,
    #[serde(rename = "family1")]
    Family1,
    #[serde(rename = "family1-ci")]
    Family1Ci,
    #[serde(rename = "family3")]
    Family3,
    #[serde(rename = "family5")]
    Family5,
    #[serde(rename = "flat-transfer")]
    FlatTransfer,
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_value(self).expect("serializable");
        f.write_str(s.as_str().expect("string"))
    }
}

/// What a matched theorem guarantees.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Guarantee {
    #[serde(rename = "WLP")]
    Wlp,
    #[serde(rename = "SLP")]
    Slp,
    /// `A_F` is a complete intersection.
    #[serde(rename = "CI")]
    Ci,
    /// Only a lower bound on the number of Sperner entries.
    #[serde(rename = "NS")]
    Ns,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremMatch {
    pub theorem: TheoremId,
    pub property: Guarantee,
    /// A Lefschetz element named by the theorem, in spec coordinates.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<LinearForm>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ns_lower_bound: Option<i64>,
    /// Spec variable playing the role of `X_1`, when the theorem singles one
    /// out.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub distinguished: Option<usize>,
}

impl TheoremMatch {
    fn plain(theorem: TheoremId, property: Guarantee) -> Self {
        TheoremMatch { theorem, property, witness: None, ns_lower_bound: None, distinguished: None }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Overall {
    Slp,
    Wlp,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub spec: BinomialSpec,
    pub key: String,
    pub matches: Vec<TheoremMatch>,
    pub overall: Overall,
}

impl ClassificationReport {
    pub fn new(spec: &BinomialSpec, mut matches: Vec<TheoremMatch>) -> Self {
        matches.sort_by_key(|m| m.theorem);
        matches.dedup_by_key(|m| m.theorem);
        let overall = if matches.iter().any(|m| m.property == Guarantee::Slp) {
            Overall::Slp
        } else if matches.iter().any(|m| m.property == Guarantee::Wlp) {
            Overall::Wlp
        } else {
            Overall::Unknown
        };
        ClassificationReport { spec: spec.clone(), key: spec.key(), matches, overall }
    }

    pub fn get(&self, id: TheoremId) -> Option<&TheoremMatch> {
        self.matches.iter().find(|m| m.theorem == id)
    }
}

/// A relabeling of a spec into the shape the theorems are stated in: the
/// distinguished variable first in the left block. `order[i]` is the spec
/// variable at position `i`.
#[derive(Clone, Debug)]
pub struct Relabeling {
    pub spec: BinomialSpec,
    pub order: Vec<usize>,
}

/// All admissible role assignments: each orientation of the binomial factor,
/// and each variable moved to the front of the left block. A variable with
/// `b = 0` can lead the left block in either orientation.
pub fn relabelings(spec: &BinomialSpec) -> Vec<Relabeling> {
    let (sw, sw_order) = spec.swapped();
    let mut out = Vec::new();
    for (oriented, base) in [(spec.clone(), (0..spec.n).collect::<Vec<_>>()), (sw, sw_order)] {
        let left: Vec<usize> = (0..oriented.r).filter(|&i| oriented.b[i] > 0).collect();
        for v in 0..oriented.n {
            if v >= oriented.r && oriented.b[v] > 0 {
                continue;
            }
            let mut new_left = vec![v];
            new_left.extend(left.iter().copied().filter(|&i| i != v));
            let right: Vec<usize> = (0..oriented.n).filter(|i| !new_left.contains(i)).collect();
            let r = new_left.len();
            if r >= oriented.n {
                continue;
            }
            let order_local: Vec<usize> = new_left.into_iter().chain(right).collect();
            let relabeled = oriented.reordered(&order_local, r);
            let order = order_local.iter().map(|&i| base[i]).collect();
            out.push(Relabeling { spec: relabeled, order });
        }
    }
    out
}

fn is_pure_power_left(s: &BinomialSpec) -> bool {
    s.b[0] > 0 && s.b[1..s.r].iter().all(|&v| v == 0)
}

/// `deg g < ⌊(d-1)/2⌋` gives the WLP.
pub fn check_gcd_criterion(spec: &BinomialSpec) -> Option<TheoremMatch> {
    let d = spec.degree();
    let bound = d.saturating_sub(1) / 2;
    (d >= 1 && spec.gcd_degree() < bound).then(|| TheoremMatch::plain(TheoremId::GcdCriterion, Guarantee::Wlp))
}

/// With `X_1` distinguished and `B = b_{r+1} + … + b_n`: (i) `a_1 > a_2 + … +
/// a_n + B` gives the WLP with `ℓ = x_1`; (ii) `a_1 ≥ a_2 + … + a_n + B` and
/// `b_1 > 0` give `NS ≥ 3 + a_1 - (a_2 + … + a_n) - B`.
pub fn check_family4(spec: &BinomialSpec) -> Vec<TheoremMatch> {
    let mut out = Vec::new();
    for rl in relabelings(spec) {
        let s = &rl.spec;
        let rest: i64 = s.a[1..].iter().map(|&v| v as i64).sum::<i64>() + s.right_degree() as i64;
        let a1 = s.a[0] as i64;
        let v = rl.order[0];
        if a1 > rest && !out.iter().any(|m: &TheoremMatch| m.theorem == TheoremId::Family4i) {
            out.push(TheoremMatch {
                theorem: TheoremId::Family4i,
                property: Guarantee::Wlp,
                witness: Some(LinearForm::var(spec.n, v)),
                ns_lower_bound: None,
                distinguished: Some(v),
            });
        }
        if a1 >= rest && s.b[0] > 0 && !out.iter().any(|m: &TheoremMatch| m.theorem == TheoremId::Family4ii) {
            out.push(TheoremMatch {
                theorem: TheoremId::Family4ii,
                property: Guarantee::Ns,
                witness: None,
                ns_lower_bound: Some(3 + a1 - rest),
                distinguished: Some(v),
            });
        }
    }
    out
}

/// `F = X_i^a (X_1^{b_1} - X_2^{b_2} … X_n^{b_n})` with `i ≥ 2`.
pub fn check_family2(spec: &BinomialSpec) -> Option<TheoremMatch> {
    relabelings(spec).into_iter().find_map(|rl| {
        let s = &rl.spec;
        let at_most_one = s.a[1..].iter().filter(|&&v| v > 0).count() <= 1;
        (is_pure_power_left(s) && s.a[0] == 0 && at_most_one).then(|| TheoremMatch {
            distinguished: Some(rl.order[0]),
            ..TheoremMatch::plain(TheoremId::Family2, Guarantee::Wlp)
        })
    })
}

/// Data of a family1 shape `X_1^a (X_1^b - X_2^{b_2} … X_n^{b_n})`, in the
/// relabeled coordinates.
#[derive(Clone, Debug)]
pub struct Family1Shape {
    pub relabeling: Relabeling,
    pub a: u32,
    pub b: u32,
}

fn family1_shape(spec: &BinomialSpec) -> Option<Family1Shape> {
    relabelings(spec).into_iter().find_map(|rl| {
        let s = &rl.spec;
        let ok = is_pure_power_left(s) && s.a[1..].iter().all(|&v| v == 0);
        let (a, b) = (s.a[0], s.b[0]);
        ok.then_some(Family1Shape { relabeling: rl, a, b })
    })
}

/// `F = X_1^a (X_1^b - X_2^{b_2} … X_n^{b_n})`: WLP, and a complete
/// intersection when `a ≥ b - 1`.
pub fn check_family1(spec: &BinomialSpec) -> Vec<TheoremMatch> {
    let Some(shape) = family1_shape(spec) else {
        return Vec::new();
    };
    let v = Some(shape.relabeling.order[0]);
    let mut out = vec![TheoremMatch { distinguished: v, ..TheoremMatch::plain(TheoremId::Family1, Guarantee::Wlp) }];
    if shape.a + 1 >= shape.b {
        out.push(TheoremMatch { distinguished: v, ..TheoremMatch::plain(TheoremId::Family1Ci, Guarantee::Ci) });
    }
    out
}

/// Binomial factor in two variables gives the SLP; in at most three
/// variables as well.
pub fn check_family3_5(spec: &BinomialSpec) -> Vec<TheoremMatch> {
    let support = spec.factor_support().len();
    let mut out = Vec::new();
    if support == 2 {
        out.push(TheoremMatch::plain(TheoremId::Family3, Guarantee::Slp));
    }
    if support <= 3 {
        out.push(TheoremMatch::plain(TheoremId::Family5, Guarantee::Slp));
    }
    out
}

/// Every theorem-based match for `spec`; no oracle calls.
pub fn classify(spec: &BinomialSpec) -> ClassificationReport {
    let mut matches = Vec::new();
    matches.extend(check_gcd_criterion(spec));
    matches.extend(check_family4(spec));
    matches.extend(check_family2(spec));
    matches.extend(check_family1(spec));
    matches.extend(check_family3_5(spec));
    ClassificationReport::new(spec, matches)
}

fn factorial(k: u32) -> BigInt {
    (1..=k).fold(BigInt::one(), |acc, i| acc * i)
}

/// Outcome of the complete-intersection check for a family1 spec.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CiEvidence {
    /// Generators of `J` in spec coordinates.
    pub generators: Vec<String>,
    pub annihilates: bool,
    pub degrees: Vec<u32>,
    pub ci_series: Vec<usize>,
    pub hvector: HVector,
    pub series_match: bool,
    pub holds: bool,
}

/// Coefficients of `∏ (1 - t^e) / (1 - t)^n`, i.e. of `∏ (1 + t + … +
/// t^{e-1})`.
pub fn ci_hilbert_series(degrees: &[u32]) -> Vec<usize> {
    let mut acc = vec![1usize];
    for &e in degrees {
        if e == 0 {
            return Vec::new();
        }
        let mut next = vec![0usize; acc.len() + e as usize - 1];
        for (i, &c) in acc.iter().enumerate() {
            for j in 0..e as usize {
                next[i + j] += c;
            }
        }
        acc = next;
    }
    acc
}

/// Checks that `J` (the family1 complete intersection, with the last
/// generator scaled to annihilate `F` under differentiation) lies in `Ann(F)`
/// and that its complete-intersection Hilbert series equals `h_F`.
///
/// `J ⊆ Ann(F)` gives a surjection `R/J → A_F`. The pure powers
/// `x_2^{b_2+1}, …` make `x_2, …, x_n` nilpotent modulo `J`, and then the last
/// generator makes `x_1` nilpotent, so `R/J` is Artinian, its `n` generators
/// form a regular sequence, and `H_{R/J}` is the CI series. Equal series and
/// surjectivity force `R/J ≅ A_F`.
pub fn verify_ci_family1(spec: &BinomialSpec) -> Result<CiEvidence> {
    let shape = family1_shape(spec).ok_or_else(|| Error::input("spec is not of family1 shape"))?;
    let (a, b) = (shape.a, shape.b);
    if a + 1 < b {
        return Err(Error::input(format!("family1 complete intersection needs a >= b-1 (a={}, b={})", a, b)));
    }
    let n = spec.n;
    let order = &shape.relabeling.order;
    let s = &shape.relabeling.spec;
    let x1 = order[0];
    let mut generators: Vec<OperatorPolynomial> = Vec::new();
    let mut degrees = vec![a + 1];
    let mut mono = vec![0u32; n];
    let mut prod_fact = BigInt::one();
    for pos in 1..n {
        let v = order[pos];
        let e = s.b[pos];
        let mut g = vec![0u32; n];
        g[v] = e + 1;
        generators.push(OperatorPolynomial::from_monomial(Monomial::new(g), BigRational::one()));
        degrees.push(e + 1);
        mono[v] = e;
        prod_fact *= factorial(e);
    }
    let alpha = factorial(a + b) / factorial(b - 1);
    let beta = factorial(a) * prod_fact / factorial(b - 1);
    let mut lead = vec![0u32; n];
    lead[x1] = a + 1;
    mono[x1] = a + 1 - b;
    let last = OperatorPolynomial::from_terms(
        n,
        [(Monomial::new(lead), BigRational::from_integer(beta)), (Monomial::new(mono), BigRational::from_integer(alpha))],
    );
    generators.insert(0, last);
    let f = spec.polynomial();
    let annihilates = generators.iter().map(|g| annihilator_membership(g, &f)).collect::<Result<Vec<_>>>()?.into_iter().all(|x| x);
    let hvector = crate::apolarity::hilbert_function(&f)?;
    let ci_series = ci_hilbert_series(&degrees);
    let series_match = ci_series == hvector.entries();
    Ok(CiEvidence {
        generators: generators.iter().map(ToString::to_string).collect(),
        annihilates,
        degrees,
        ci_series,
        hvector,
        series_match,
        holds: annihilates && series_match,
    })
}

/// The transfer lemma: if `A_G` has the WLP and its run of Sperner entries is
/// at least `deg p + 2` long, then `A_{p∘G}` has the WLP and
/// `NS_{A_{p∘G}} ≥ 2⌊NS_{A_G}/2⌋ - deg p`.
pub fn flat_transfer(g: &DualPolynomial, p: &OperatorPolynomial, opts: &DecideOptions) -> Result<Option<TheoremMatch>> {
    let f = diff_apply(p, g)?;
    if f.is_zero() {
        return Err(Error::input("p o G is zero"));
    }
    if !p.is_homogeneous() {
        return Err(Error::input("p must be homogeneous"));
    }
    let deg_p = p.degree().expect("nonzero") as i64;
    let galg = GorensteinAlgebra::new(g)?;
    let ns = sperner_stats(galg.hvector()).flat_length as i64;
    if ns < deg_p + 2 {
        return Ok(None);
    }
    if !decide_wlp_in(&galg, opts)?.holds() {
        return Ok(None);
    }
    Ok(Some(TheoremMatch {
        ns_lower_bound: Some(2 * (ns / 2) - deg_p),
        ..TheoremMatch::plain(TheoremId::FlatTransfer, Guarantee::Wlp)
    }))
}

/// Flat transfer from `G = X_v F` with `p = x_v`, over the variables `v`
/// with `b_v = 0` (then `x_v ∘ G = (a_v + 1) F`).
pub fn flat_transfer_for_spec(spec: &BinomialSpec, opts: &DecideOptions) -> Result<Option<TheoremMatch>> {
    let f = spec.polynomial();
    for v in (0..spec.n).filter(|&v| spec.b[v] == 0) {
        let g = f.mul_monomial(&Monomial::var(spec.n, v));
        let p = OperatorPolynomial::var(spec.n, v);
        if let Some(m) = flat_transfer(&g, &p, opts)? {
            return Ok(Some(TheoremMatch { distinguished: Some(v), ..m }));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::apolarity::hilbert_function;
    use crate::lefschetz::{decide_slp_in, is_wl_element, Mode};

    fn dual(s: &str) -> DualPolynomial {
        DualPolynomial::parse(s).unwrap()
    }

    fn spec(a: &[u32], b: &[u32], r: usize) -> BinomialSpec {
        BinomialSpec::new(a.len(), r, a.to_vec(), b.to_vec()).unwrap()
    }

    fn example() -> BinomialSpec {
        spec(&[6, 2, 0], &[2, 1, 3], 2)
    }

    #[test]
    fn normalize_worked_example() {
        let f = dual("X1^8*X2^3 - X1^6*X2^2*X3^3");
        let (s, perm) = normalize(&f).unwrap();
        assert_eq!(s, example());
        assert_eq!(s.degree(), 11);
        assert_eq!(reconstruct(&s, &perm), f);
    }

    #[test]
    fn normalize_examples() {
        let (s, _) = normalize(&dual("X1^3 - X2^3")).unwrap();
        assert_eq!((s.n, s.r, s.a.clone(), s.b.clone()), (2, 1, vec![0, 0], vec![3, 3]));
        let f = dual("X2^2*X1 - X3*X4*X2");
        let (s, perm) = normalize(&f).unwrap();
        assert_eq!(s.g(), Monomial::new(perm.iter().map(|&i| u32::from(i == 1)).collect()));
        assert_eq!(reconstruct(&s, &perm), f);
        assert_eq!(s.polynomial(), f.permuted(&perm));
        // The negative term comes first in the input.
        let f = dual("-X1^2 + X2^2");
        let (s, perm) = normalize(&f).unwrap();
        assert_eq!(reconstruct(&s, &perm), f);
    }

    #[test]
    fn normalize_errors() {
        assert!(matches!(normalize(&dual("X1^2 - X2^2 + X3^2")), Err(Error::Input(_))));
        assert!(matches!(normalize(&dual("X1^2 - X2")), Err(Error::Input(_))));
        assert!(matches!(normalize(&dual("2*X1^2 - X2^2")), Err(Error::UnsupportedCoefficient(_))));
        assert!(matches!(normalize(&dual("X1^2 + X2^2")), Err(Error::UnsupportedCoefficient(_))));
    }

    #[test]
    fn spec_validation() {
        assert!(BinomialSpec::new(2, 1, vec![0, 0], vec![2, 1]).is_err());
        assert!(BinomialSpec::new(2, 2, vec![0, 0], vec![1, 1]).is_err());
        assert!(BinomialSpec::new(2, 1, vec![0], vec![1, 1]).is_err());
        assert!(BinomialSpec::new(3, 1, vec![1, 0, 0], vec![0, 0, 0]).is_err());
    }

    #[test]
    fn keys_and_canonical_form() {
        let s = example();
        assert_eq!(BinomialSpec::parse_key(&s.key()).unwrap().canonical(), s.canonical());
        // Swapping the terms and permuting variables keeps the key.
        let swapped = spec(&[0, 6, 2], &[3, 2, 1], 1);
        assert_eq!(swapped.key(), s.key());
        assert_eq!(spec(&[0, 0], &[1, 1], 1).key(), "n2r1a0,0b1,1");
    }

    #[test]
    fn gcd_criterion() {
        assert!(check_gcd_criterion(&spec(&[0, 0, 0, 0], &[2, 1, 1, 2], 2)).is_some());
        assert!(check_gcd_criterion(&example()).is_none());
        // d = 5, floor(4/2) = 2: deg g = 2 is the boundary.
        assert!(check_gcd_criterion(&spec(&[2, 0, 0], &[3, 2, 1], 1)).is_none());
        assert!(check_gcd_criterion(&spec(&[0, 0, 0], &[3, 2, 1], 1)).is_some());
    }

    #[test]
    fn family4_examples() {
        let m = check_family4(&example());
        let i = m.iter().find(|m| m.theorem == TheoremId::Family4i).unwrap();
        assert_eq!(i.witness, Some(LinearForm::var(3, 0)));
        let m = check_family4(&spec(&[5, 0, 0], &[2, 1, 3], 2));
        assert!(m.iter().any(|m| m.theorem == TheoremId::Family4i));
        let s = spec(&[5, 2, 0], &[2, 1, 3], 2);
        let m = check_family4(&s);
        assert!(!m.iter().any(|m| m.theorem == TheoremId::Family4i));
        let ii = m.iter().find(|m| m.theorem == TheoremId::Family4ii).unwrap();
        assert_eq!(ii.ns_lower_bound, Some(3));
        let h = hilbert_function(&s.polynomial()).unwrap();
        assert!(sperner_stats(&h).flat_length >= 3);
    }

    #[test]
    fn family4_witness_is_valid_on_example() {
        let s = example();
        let w = check_family4(&s).into_iter().find_map(|m| m.witness).unwrap();
        assert!(is_wl_element(&s.polynomial(), &w).unwrap());
    }

    #[test]
    fn family2_and_family1() {
        let (s, _) = normalize(&dual("X2^4*X1^3 - X2^5*X3*X4")).unwrap();
        assert!(check_family2(&s).is_some());
        assert!(check_family1(&s).is_empty());
        let (s, _) = normalize(&dual("X1^7 - X1^4*X2^2*X3")).unwrap();
        let m = check_family1(&s);
        assert_eq!(m.iter().map(|m| m.theorem).collect::<Vec<_>>(), vec![TheoremId::Family1, TheoremId::Family1Ci]);
        let (s, _) = normalize(&dual("X1^4 - X1*X2^2*X3")).unwrap();
        let m = check_family1(&s);
        assert_eq!(m.iter().map(|m| m.theorem).collect::<Vec<_>>(), vec![TheoremId::Family1]);
        let alg = GorensteinAlgebra::new(&s.polynomial()).unwrap();
        assert!(decide_wlp_in(&alg, &DecideOptions::new(Mode::Certify, 1)).unwrap().holds());
    }

    #[test]
    fn ci_verification() {
        let (s, _) = normalize(&dual("X1^7 - X1^4*X2^2*X3")).unwrap();
        let ev = verify_ci_family1(&s).unwrap();
        assert_eq!(ev.degrees, vec![5, 3, 2]);
        assert!(ev.annihilates && ev.series_match && ev.holds);
        let (s, _) = normalize(&dual("X1^4 - X1*X2^2*X3")).unwrap();
        assert!(verify_ci_family1(&s).is_err());
        assert!(verify_ci_family1(&example()).is_err());
    }

    #[test]
    fn ci_series_coefficients() {
        assert_eq!(ci_hilbert_series(&[2, 2]), vec![1, 2, 1]);
        assert_eq!(ci_hilbert_series(&[5, 3, 2]).iter().sum::<usize>(), 30);
        assert_eq!(ci_hilbert_series(&[]), vec![1]);
    }

    #[test]
    fn family3_and_family5() {
        let (s, _) = normalize(&dual("X1^5*X2*X3 - X1^2*X2^4*X3")).unwrap();
        let ids: Vec<_> = check_family3_5(&s).iter().map(|m| m.theorem).collect();
        assert_eq!(ids, vec![TheoremId::Family3, TheoremId::Family5]);
        let (s, _) = normalize(&dual("X4^2*X1^2*X2 - X4^2*X3^3")).unwrap();
        let ids: Vec<_> = check_family3_5(&s).iter().map(|m| m.theorem).collect();
        assert_eq!(ids, vec![TheoremId::Family5]);
        assert!(check_family3_5(&spec(&[0, 0, 0, 0], &[1, 1, 1, 1], 2)).is_empty());
        let alg = GorensteinAlgebra::new(&s.polynomial()).unwrap();
        assert!(decide_slp_in(&alg, &DecideOptions::new(Mode::Certify, 1)).unwrap().holds());
    }

    #[test]
    fn classify_examples() {
        // The factor of the worked example lives in three variables, so the
        // three-variable SLP result applies on top of family4 (i).
        let r = classify(&example());
        assert!(r.get(TheoremId::Family4i).is_some());
        assert!(r.get(TheoremId::Family5).is_some());
        assert_eq!(r.overall, Overall::Slp);
        let r = classify(&spec(&[6, 2, 0, 0], &[2, 1, 1, 2], 2));
        assert_eq!(r.overall, Overall::Wlp);
        assert!(r.get(TheoremId::Family4i).is_some());
        let (s, _) = normalize(&dual("X1^4*X2*X3 - X1^2*X2^3*X3")).unwrap();
        assert_eq!(classify(&s).overall, Overall::Slp);
        let r = classify(&spec(&[2, 2, 0, 0], &[1, 1, 1, 1], 2));
        assert_eq!(r.overall, Overall::Unknown);
        assert!(r.matches.is_empty());
        let json = serde_json::to_value(classify(&example())).unwrap();
        assert_eq!(json["matches"][0]["theorem"], "family4i");
    }

    #[test]
    fn relabelings_preserve_polynomial_up_to_order() {
        let s = example();
        for rl in relabelings(&s) {
            rl.spec.validate().unwrap();
            let f = rl.spec.polynomial();
            let mut inverse = vec![0; s.n];
            for (i, &p) in rl.order.iter().enumerate() {
                inverse[p] = i;
            }
            let back = f.permuted(&inverse);
            assert!(back == s.polynomial() || back == -&s.polynomial());
        }
    }

    #[test]
    fn flat_transfer_cases() {
        let opts = DecideOptions::new(Mode::Certify, 3);
        let f0 = example().polynomial();
        let g = f0.mul_monomial(&Monomial::var(3, 0));
        let p = OperatorPolynomial::var(3, 0);
        let ns_g = sperner_stats(&hilbert_function(&g).unwrap()).flat_length as i64;
        let ns_f = sperner_stats(&hilbert_function(&f0).unwrap()).flat_length as i64;
        match flat_transfer(&g, &p, &opts).unwrap() {
            Some(m) => assert!(m.ns_lower_bound.unwrap() <= ns_f),
            None => assert!(ns_g < 3),
        }
        let trivial = flat_transfer(&f0, &OperatorPolynomial::one(3), &opts).unwrap().unwrap();
        assert_eq!(trivial.ns_lower_bound, Some(4));
        // NS = 2 = deg p + 1 for X1^3 - X2^3.
        let q = DualPolynomial::parse("X1^3 - X2^3").unwrap();
        assert!(flat_transfer(&q, &OperatorPolynomial::var(2, 0), &opts).unwrap().is_none());
        assert!(flat_transfer(&q, &OperatorPolynomial::parse("x1^4").unwrap(), &opts).is_err());
    }
}
