//! Sparse multivariate polynomials with exact rational coefficients.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::class::Label;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalPolynomial {
    n: usize,
    /// Exponent vector → nonzero coefficient.
    terms: BTreeMap<Vec<u32>, BigRational>,
}

impl RationalPolynomial {
    pub fn zero(n: usize) -> Self {
        RationalPolynomial { n, terms: BTreeMap::new() }
    }

    pub fn constant(n: usize, c: BigRational) -> Self {
        let mut p = Self::zero(n);
        p.add_term(vec![0; n], c);
        p
    }

    pub fn one(n: usize) -> Self {
        Self::constant(n, BigRational::one())
    }

    /// `(x_i − a) / (b − a)`.
    pub fn lagrange_factor(n: usize, i: usize, a: Label, b: Label) -> Self {
        let scale = BigRational::one() / BigRational::from_integer(BigInt::from(b) - BigInt::from(a));
        let mut p = Self::zero(n);
        let mut e = vec![0; n];
        p.add_term(e.clone(), -BigRational::from_integer(BigInt::from(a)) * &scale);
        e[i] = 1;
        p.add_term(e, scale);
        p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, BigRational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, exponents: Vec<u32>, c: BigRational) {
        assert_eq!(exponents.len(), self.n, "exponent vector length");
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(exponents);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &RationalPolynomial, c: &BigRational) {
        assert_eq!(self.n, other.n);
        for (e, a) in &other.terms {
            self.add_term(e.clone(), a * c);
        }
    }

    pub fn mul(&self, other: &RationalPolynomial) -> RationalPolynomial {
        assert_eq!(self.n, other.n);
        let mut out = Self::zero(self.n);
        for (e1, a) in &self.terms {
            for (e2, b) in &other.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(x, y)| x + y).collect();
                out.add_term(e, a * b);
            }
        }
        out
    }

    pub fn eval(&self, point: &[Label]) -> BigRational {
        assert_eq!(point.len(), self.n, "evaluation point length");
        let mut total = BigRational::zero();
        for (e, c) in &self.terms {
            let mut m = BigInt::one();
            for (&x, &p) in point.iter().zip(e) {
                m *= num_traits::pow(BigInt::from(x), p as usize);
            }
            total += c * BigRational::from_integer(m);
        }
        total
    }

    /// Values on every point of `[k]^n`, in the lexicographic order of
    /// [`crate::class::words`]. Evaluates one axis at a time over integers
    /// scaled by the common denominator, so the cost is `O(n·k^n·deg)`
    /// rather than `O(k^n·terms)`.
    pub fn eval_grid(&self, k: Label) -> Vec<BigRational> {
        let denom = self.terms.values().fold(BigInt::one(), |l, c| num_integer::Integer::lcm(&l, c.denom()));
        let mut shape: Vec<usize> = (0..self.n).map(|i| self.degree_in(i) as usize + 1).collect();
        let mut data = vec![BigInt::zero(); shape.iter().product()];
        for (e, c) in &self.terms {
            let idx = e.iter().zip(&shape).fold(0, |acc, (&p, &s)| acc * s + p as usize);
            data[idx] = c.numer() * (&denom / c.denom());
        }
        let k = k as usize;
        for axis in 0..self.n {
            let deg = shape[axis];
            let outer: usize = shape[..axis].iter().product();
            let inner: usize = shape[axis + 1..].iter().product();
            let powers: Vec<Vec<BigInt>> =
                (0..k).map(|x| (0..deg).map(|p| num_traits::pow(BigInt::from(x), p)).collect()).collect();
            let mut next = vec![BigInt::zero(); outer * k * inner];
            for o in 0..outer {
                for (x, pw) in powers.iter().enumerate() {
                    for (p, w) in pw.iter().enumerate().filter(|(_, w)| !w.is_zero()) {
                        let src = (o * deg + p) * inner;
                        let dst = (o * k + x) * inner;
                        for j in 0..inner {
                            if !data[src + j].is_zero() {
                                let v = &data[src + j] * w;
                                next[dst + j] += v;
                            }
                        }
                    }
                }
            }
            shape[axis] = k;
            data = next;
        }
        data.into_iter().map(|v| BigRational::new(v, denom.clone())).collect()
    }

    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|e| e[i]).max().unwrap_or(0)
    }

    /// Adds a new variable at position `i` on which the polynomial does not depend.
    pub fn embed(&self, i: usize) -> RationalPolynomial {
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mut e = e.clone();
                e.insert(i, 0);
                (e, c.clone())
            })
            .collect();
        RationalPolynomial { n: self.n + 1, terms }
    }
}

impl fmt::Display for RationalPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (e, c)) in self.terms.iter().enumerate() {
            if idx > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})")?;
            for (i, &p) in e.iter().enumerate() {
                match p {
                    0 => {}
                    1 => write!(f, "·x{i}")?,
                    _ => write!(f, "·x{i}^{p}")?,
                }
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct TermDoc {
    exponents: Vec<u32>,
    num: String,
    den: String,
}

#[derive(Serialize, Deserialize)]
struct PolyDoc {
    n: usize,
    terms: Vec<TermDoc>,
}

impl Serialize for RationalPolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        PolyDoc {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| TermDoc { exponents: e.clone(), num: c.numer().to_string(), den: c.denom().to_string() })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for RationalPolynomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let doc = PolyDoc::deserialize(d)?;
        let mut p = RationalPolynomial::zero(doc.n);
        for t in doc.terms {
            if t.exponents.len() != doc.n {
                return Err(D::Error::custom("exponent vector length differs from n"));
            }
            let c = parse_rational(&t.num, &t.den).map_err(D::Error::custom)?;
            p.add_term(t.exponents, c);
        }
        Ok(p)
    }
}

pub(crate) fn parse_rational(num: &str, den: &str) -> Result<BigRational, String> {
    let num: BigInt = num.parse().map_err(|_| format!("bad numerator {num:?}"))?;
    let den: BigInt = den.parse().map_err(|_| format!("bad denominator {den:?}"))?;
    if den.is_zero() {
        return Err("zero denominator".into());
    }
    Ok(BigRational::new(num, den))
}

/// Product over coordinates of the Lagrange basis polynomials: 1 at `h`,
/// 0 everywhere else on `[k]^n`.
pub fn indicator_poly(h: &[Label], k: Label) -> RationalPolynomial {
    // The indicator factors over coordinates, so build each univariate
    // Lagrange basis polynomial densely and take the tensor product.
    let factors: Vec<(Vec<(u32, BigInt)>, BigInt)> = h
        .iter()
        .map(|&hi| {
            let mut coeffs = vec![BigInt::one()];
            let mut denom = BigInt::one();
            for j in (0..k).filter(|&j| j != hi) {
                let j = BigInt::from(j);
                let mut next = vec![BigInt::zero(); coeffs.len() + 1];
                for (p, c) in coeffs.iter().enumerate() {
                    next[p + 1] += c;
                    next[p] -= c * &j;
                }
                coeffs = next;
                denom *= BigInt::from(hi) - j;
            }
            let coeffs = coeffs.into_iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(p, c)| (p as u32, c)).collect();
            (coeffs, denom)
        })
        .collect();
    let denom: BigInt = factors.iter().map(|(_, d)| d).product();
    let mut p = RationalPolynomial::zero(h.len());
    let mut product = vec![(Vec::with_capacity(h.len()), BigInt::one())];
    for (f, _) in &factors {
        product = product
            .into_iter()
            .flat_map(|(e, c)| {
                f.iter().map(move |(q, a)| {
                    let mut e = e.clone();
                    e.push(*q);
                    (e, &c * a)
                })
            })
            .collect();
    }
    p.terms = product.into_iter().map(|(e, c)| (e, BigRational::new(c, denom.clone()))).collect();
    p
}
