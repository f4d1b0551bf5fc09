//! Inverse systems: catalecticants, monomial bases of `A_F`, the Hilbert
//! function, and Sperner statistics.

use std::collections::HashMap;
use std::fmt;
use std::sync::OnceLock;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactla::{rank, RationalMatrix, RowEchelon};
use crate::polyring::{
    contract_apply, diff_apply, diff_monomial, monomials_of_degree, DualPolynomial, Monomial,
    OperatorPolynomial,
};

/// Graded dimensions `h_0..h_d` of `A_F`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct HVector {
    entries: Vec<usize>,
}

impl HVector {
    pub fn new(entries: Vec<usize>) -> Self {
        HVector { entries }
    }

    pub fn entries(&self) -> &[usize] {
        &self.entries
    }

    pub fn socle_degree(&self) -> u32 {
        self.entries.len().saturating_sub(1) as u32
    }

    pub fn get(&self, t: u32) -> usize {
        self.entries.get(t as usize).copied().unwrap_or(0)
    }

    pub fn is_symmetric(&self) -> bool {
        self.entries.iter().eq(self.entries.iter().rev())
    }

    /// Gorenstein shape: positive entries, `h_0 = h_d = 1`, symmetric.
    pub fn is_gorenstein_shaped(&self) -> bool {
        !self.entries.is_empty()
            && self.entries[0] == 1
            && *self.entries.last().expect("nonempty") == 1
            && self.entries.iter().all(|&h| h >= 1)
            && self.is_symmetric()
    }
}

impl fmt::Display for HVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(usize::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Monomials of degree `t` whose classes form a basis of `[A_F]_t`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedBasis {
    pub degree: u32,
    pub monomials: Vec<Monomial>,
}

impl GradedBasis {
    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }
}

impl fmt::Display for GradedBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .monomials
            .iter()
            .map(|m| OperatorPolynomial::from_monomial(m.clone(), BigRational::from_integer(1.into())).to_string())
            .collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpernerStats {
    pub sperner: usize,
    pub flat_length: usize,
    pub flat_start: u32,
    pub flat_end: u32,
}

impl SpernerStats {
    pub fn has_flat(&self) -> bool {
        self.flat_length >= 3
    }
}

/// Socle degree of a valid dual generator.
pub fn check_generator(f: &DualPolynomial) -> Result<u32> {
    if f.is_zero() {
        return Err(Error::input("dual generator is zero"));
    }
    if !f.is_homogeneous() {
        return Err(Error::input("dual generator is not homogeneous"));
    }
    Ok(f.degree().expect("nonzero"))
}

fn column_index(n: usize, deg: u32) -> HashMap<Monomial, usize> {
    monomials_of_degree(n, deg).into_iter().enumerate().map(|(i, m)| (m, i)).collect()
}

fn build_catalecticant(
    f: &DualPolynomial,
    t: u32,
    apply: impl Fn(&Monomial) -> Result<DualPolynomial>,
) -> Result<RationalMatrix> {
    let d = check_generator(f)?;
    if t > d {
        return Err(Error::input(format!("degree {} exceeds socle degree {}", t, d)));
    }
    let n = f.nvars();
    let rows = monomials_of_degree(n, t);
    let cols = column_index(n, d - t);
    let mut m = RationalMatrix::zeros(rows.len(), cols.len());
    for (i, mono) in rows.iter().enumerate() {
        for (target, c) in apply(mono)?.terms() {
            m.set(i, cols[target], c.clone());
        }
    }
    Ok(m)
}

/// Coefficient matrix of `m o F` for `deg m = t`: rows are degree-`t`
/// operator monomials, columns degree-`(d-t)` dual monomials.
pub fn catalecticant(f: &DualPolynomial, t: u32) -> Result<RationalMatrix> {
    build_catalecticant(f, t, |m| Ok(diff_monomial(m, f)))
}

/// Catalecticant under the contraction action.
pub fn contraction_catalecticant(f: &DualPolynomial, t: u32) -> Result<RationalMatrix> {
    build_catalecticant(f, t, |m| {
        contract_apply(&OperatorPolynomial::from_monomial(m.clone(), BigRational::from_integer(1.into())), f)
    })
}

/// `h_t = rank catalecticant(F, t)` for `t = 0..deg F`.
pub fn hilbert_function(f: &DualPolynomial) -> Result<HVector> {
    let d = check_generator(f)?;
    let entries = (0..=d).map(|t| catalecticant(f, t).map(|m| rank(&m))).collect::<Result<Vec<_>>>()?;
    Ok(HVector::new(entries))
}

/// Greedy monomial basis of `[A_F]_t`.
///
/// Candidates are scanned from the last monomial of the degree-`t` order
/// towards `x1^t`, keeping each one whose catalecticant row is independent of
/// those kept so far. The result is listed in the forward order.
pub fn graded_basis(f: &DualPolynomial, t: u32) -> Result<GradedBasis> {
    let d = check_generator(f)?;
    if t > d {
        return Err(Error::input(format!("degree {} exceeds socle degree {}", t, d)));
    }
    let n = f.nvars();
    let cols = column_index(n, d - t);
    let candidates = monomials_of_degree(n, t);
    let mut echelon = RowEchelon::new();
    let mut keep = vec![false; candidates.len()];
    for (i, m) in candidates.iter().enumerate().rev() {
        let image = diff_monomial(m, f);
        if image.is_zero() {
            continue;
        }
        let row: Vec<(usize, BigRational)> = image.terms().map(|(mono, c)| (cols[mono], c.clone())).collect();
        if echelon.insert(&row) {
            keep[i] = true;
        }
    }
    let monomials = candidates.into_iter().zip(keep).filter(|(_, k)| *k).map(|(m, _)| m).collect();
    Ok(GradedBasis { degree: t, monomials })
}

pub fn sperner_stats(h: &HVector) -> SpernerStats {
    let sperner = h.entries().iter().copied().max().unwrap_or(0);
    let attaining: Vec<u32> =
        h.entries().iter().enumerate().filter(|(_, &v)| v == sperner).map(|(i, _)| i as u32).collect();
    SpernerStats {
        sperner,
        flat_length: attaining.len(),
        flat_start: attaining.first().copied().unwrap_or(0),
        flat_end: attaining.last().copied().unwrap_or(0),
    }
}

/// `p in Ann(F)`.
pub fn annihilator_membership(p: &OperatorPolynomial, f: &DualPolynomial) -> Result<bool> {
    Ok(diff_apply(p, f)?.is_zero())
}

/// A dual generator with its Hilbert function and lazily computed bases.
#[derive(Debug)]
pub struct GorensteinAlgebra {
    generator: DualPolynomial,
    integral: DualPolynomial,
    socle_degree: u32,
    hvector: HVector,
    bases: Vec<OnceLock<GradedBasis>>,
}

impl GorensteinAlgebra {
    pub fn new(f: &DualPolynomial) -> Result<Self> {
        let d = check_generator(f)?;
        let hvector = hilbert_function(f)?;
        let integral = f.scale(&BigRational::from_integer(f.denominator_lcm()));
        Ok(GorensteinAlgebra {
            generator: f.clone(),
            integral,
            socle_degree: d,
            hvector,
            bases: (0..=d).map(|_| OnceLock::new()).collect(),
        })
    }

    pub fn generator(&self) -> &DualPolynomial {
        &self.generator
    }

    /// The generator scaled to integer coefficients; it defines the same
    /// algebra.
    pub fn integral_generator(&self) -> &DualPolynomial {
        &self.integral
    }

    pub fn nvars(&self) -> usize {
        self.generator.nvars()
    }

    pub fn socle_degree(&self) -> u32 {
        self.socle_degree
    }

    pub fn hvector(&self) -> &HVector {
        &self.hvector
    }

    pub fn h(&self, t: u32) -> usize {
        self.hvector.get(t)
    }

    pub fn basis(&self, t: u32) -> &GradedBasis {
        self.bases[t as usize].get_or_init(|| graded_basis(&self.generator, t).expect("degree in range"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::rational;

    fn dual(s: &str) -> DualPolynomial {
        DualPolynomial::parse(s).unwrap()
    }

    const EXAMPLE: &str = "X1^8*X2^3 - X1^6*X2^2*X3^3";

    #[test]
    fn catalecticant_small() {
        let m = catalecticant(&dual("X1^2"), 1).unwrap();
        assert_eq!((m.rows(), m.cols()), (1, 1));
        assert_eq!(m.get(0, 0), rational(2));
        let m = catalecticant(&dual("X1*X2"), 1).unwrap();
        assert_eq!(rank(&m), 2);
        assert!(catalecticant(&dual("X1^2"), 3).is_err());
    }

    #[test]
    fn example_degree_five_catalecticant() {
        let m = catalecticant(&dual(EXAMPLE), 5).unwrap();
        assert_eq!((m.rows(), m.cols()), (21, 28));
        assert_eq!(rank(&m), 12);
    }

    #[test]
    fn hilbert_functions() {
        assert_eq!(hilbert_function(&dual("X1^5")).unwrap().entries(), &[1, 1, 1, 1, 1, 1]);
        assert_eq!(
            hilbert_function(&dual(EXAMPLE)).unwrap().entries(),
            &[1, 3, 6, 10, 12, 12, 12, 12, 10, 6, 3, 1]
        );
        assert_eq!(hilbert_function(&dual("X1^3 - X2^3")).unwrap().entries(), &[1, 2, 2, 1]);
        assert!(hilbert_function(&dual("X1^2 + X2")).is_err());
        assert!(hilbert_function(&DualPolynomial::zero(2)).is_err());
    }

    #[test]
    fn worked_example_basis_in_degree_five() {
        let b = graded_basis(&dual(EXAMPLE), 5).unwrap();
        assert_eq!(
            b.to_string(),
            "[x1^5, x1^4*x2, x1^4*x3, x1^3*x2^2, x1^3*x2*x3, x1^3*x3^2, x1^2*x2^2*x3, \
             x1^2*x2*x3^2, x1^2*x3^3, x1*x2^2*x3^2, x1*x2*x3^3, x2^2*x3^3]"
        );
    }

    #[test]
    fn small_bases() {
        let b = graded_basis(&dual("X1*X2"), 1).unwrap();
        assert_eq!(b.monomials, vec![Monomial::new(vec![1, 0]), Monomial::new(vec![0, 1])]);
        let b = graded_basis(&dual("X1^3 - X2^3"), 1).unwrap();
        assert_eq!(b.len(), 2);
    }

    #[test]
    fn sperner_examples() {
        let s = sperner_stats(&HVector::new(vec![1, 3, 6, 10, 12, 12, 12, 12, 10, 6, 3, 1]));
        assert_eq!((s.sperner, s.flat_length, s.flat_start, s.flat_end), (12, 4, 4, 7));
        assert!(s.has_flat());
        let s = sperner_stats(&HVector::new(vec![1, 1, 1]));
        assert_eq!((s.sperner, s.flat_length), (1, 3));
        let s = sperner_stats(&HVector::new(vec![1, 2, 2, 1]));
        assert_eq!((s.sperner, s.flat_length), (2, 2));
        assert!(!s.has_flat());
    }

    #[test]
    fn annihilator_examples() {
        let x3 = OperatorPolynomial::parse_with_vars("x3", 3).unwrap();
        assert!(annihilator_membership(&x3, &DualPolynomial::parse_with_vars("X1*X2", 3).unwrap()).unwrap());
        let p = OperatorPolynomial::parse("x1^5").unwrap();
        assert!(annihilator_membership(&p, &dual("X1^4")).unwrap());
        assert!(!annihilator_membership(&p, &dual("X1^5")).unwrap());
        // family1 generator x2^(b2+1) on X1^4 (X1^3 - X2^2 X3)
        let f = dual("X1^7 - X1^4*X2^2*X3");
        let g = OperatorPolynomial::parse_with_vars("x2^3", 3).unwrap();
        assert!(annihilator_membership(&g, &f).unwrap());
    }

    #[test]
    fn hvector_display() {
        assert_eq!(HVector::new(vec![1, 2, 1]).to_string(), "(1,2,1)");
    }
}
