//! Polynomial certificates for the DS Sauer bound.
//!
//! Functions on a class `H` form a vector space of dimension `|H|`. The
//! monomials `x^e` with `e_i < k` for all `i` and `e_i >= ℓ` for at most `d`
//! coordinates span it whenever `d` is at least the ℓ-DS dimension, which
//! bounds `|H|` by their number. [`spanning_certificate`] checks the spanning
//! claim by rank; [`construct_q`] replays the inductive construction of a
//! triangular basis inside their span.

mod linalg;
mod poly;

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::bounds::ds_sauer_bound;
use crate::class::{check_cap, cube_size, words, HypothesisClass, Label, Pattern};
use crate::dims::ds_dimension;
use crate::error::{Error, Result};
use crate::lines::LineIndex;

pub use linalg::{rank_fraction_free, DEFAULT_BIT_CAP};
pub use poly::{indicator_poly, RationalPolynomial};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MonomialSet {
    pub n: usize,
    pub k: Label,
    pub ell: usize,
    pub d: usize,
    /// Lexicographically ordered.
    pub exponents: Vec<Vec<u32>>,
}

impl MonomialSet {
    pub fn len(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exponents.is_empty()
    }

    pub fn admits(&self, e: &[u32]) -> bool {
        admissible(e, self.k, self.ell, self.d)
    }
}

fn admissible(e: &[u32], k: Label, ell: usize, d: usize) -> bool {
    e.iter().all(|&x| x < k) && e.iter().filter(|&&x| x as usize >= ell).count() <= d
}

/// Exponent vectors with entries below `k` and at most `d` entries `>= ℓ`.
pub fn monomial_set(n: usize, k: Label, ell: usize, d: usize, cap: u128) -> Result<MonomialSet> {
    let expected = ds_sauer_bound(n, k, ell, d)?;
    check_cap("monomial enumeration", cube_size(n, k), cap)?;
    let exponents: Vec<Vec<u32>> = words(n, k).map(|w| w.0).filter(|e| admissible(e, k, ell, d)).collect();
    if BigUint::from(exponents.len()) != expected {
        return Err(Error::Verification(format!(
            "monomial count {} differs from the bound {expected}",
            exponents.len()
        )));
    }
    Ok(MonomialSet { n, k, ell, d, exponents })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpanReport {
    pub class_size: usize,
    pub monomials: usize,
    pub rank: usize,
    pub spans: bool,
}

/// Rank of the monomial-by-pattern evaluation matrix; `spans` iff the rank is `|H|`.
pub fn spanning_certificate(h: &HypothesisClass, ell: usize, d: usize, cap: u128) -> Result<SpanReport> {
    h.require_nonempty()?;
    let true_d = ds_dimension(h, ell)?.value;
    if d < true_d {
        return Err(Error::Precondition(format!("d = {d} is below the DS dimension {true_d}")));
    }
    let monomials = monomial_set(h.n(), h.k(), ell, d, cap)?;
    check_cap("evaluation matrix entries", (monomials.len() as u128) * (h.len() as u128), cap)?;
    let rows: Vec<Vec<BigInt>> = monomials
        .exponents
        .iter()
        .map(|e| {
            h.patterns()
                .iter()
                .map(|p| p.iter().zip(e).map(|(&x, &a)| num_traits::pow(BigInt::from(x), a as usize)).product())
                .collect()
        })
        .collect();
    let rank = rank_fraction_free(rows, DEFAULT_BIT_CAP)?;
    Ok(SpanReport { class_size: h.len(), monomials: monomials.len(), rank, spans: rank == h.len() })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeelStep {
    /// Deficient direction; `None` for steps of the interpolation base case.
    pub direction: Option<usize>,
    /// Labels at `direction` of the pattern's remaining neighbours.
    pub values: Vec<Label>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub n: usize,
    pub k: Label,
    pub ell: usize,
    pub d: usize,
    pub patterns: Vec<Pattern>,
    /// Indices into `patterns`, in peeling order.
    pub ordering: Vec<usize>,
    pub steps: Vec<PeelStep>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q_polys: Option<Vec<RationalPolynomial>>,
    /// `A[i][j] = Q_i(h_j)` in peeling order, as `"p/q"` strings.
    #[serde(default, skip_serializing_if = "Option::is_none", with = "matrix_strings")]
    pub eval_matrix: Option<Vec<Vec<BigRational>>>,
}

mod matrix_strings {
    use num_rational::BigRational;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(m: &Option<Vec<Vec<BigRational>>>, s: S) -> Result<S::Ok, S::Error> {
        m.as_ref()
            .map(|rows| rows.iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>())
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Vec<Vec<BigRational>>>, D::Error> {
        use serde::de::Error;
        let raw: Option<Vec<Vec<String>>> = Option::deserialize(d)?;
        raw.map(|rows| {
            rows.into_iter()
                .map(|r| {
                    r.into_iter()
                        .map(|x| {
                            let (num, den) = x.split_once('/').unwrap_or((&x, "1"));
                            super::poly::parse_rational(num, den).map_err(D::Error::custom)
                        })
                        .collect()
                })
                .collect()
        })
        .transpose()
    }
}

impl Certificate {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// Compact text rendering: one line per step.
    pub fn to_text(&self) -> String {
        let mut out = format!("n={} k={} ell={} d={} size={}\n", self.n, self.k, self.ell, self.d, self.patterns.len());
        for (t, (&p, s)) in self.ordering.iter().zip(&self.steps).enumerate() {
            let values: Vec<String> = s.values.iter().map(|v| v.to_string()).collect();
            let dir = s.direction.map_or_else(|| "base".to_string(), |d| d.to_string());
            out.push_str(&format!("step={t} pattern={} dir={dir} S={{{}}}\n", self.patterns[p], values.join(",")));
        }
        out
    }
}

fn check_ell_d(h: &HypothesisClass, ell: usize, d: usize) -> Result<()> {
    if ell == 0 || ell > h.k() as usize {
        return Err(Error::InvalidParameter(format!("need 1 <= ℓ <= k (got ℓ = {ell}, k = {})", h.k())));
    }
    if d > h.n() {
        return Err(Error::InvalidParameter(format!("d = {d} exceeds n = {}", h.n())));
    }
    Ok(())
}

/// Repeatedly removes the lexicographically smallest `(pattern, direction)`
/// whose line in the remaining class holds at most `ℓ` patterns.
fn peel_sequence(patterns: &[Vec<Label>], n: usize, ell: usize) -> Result<(Vec<usize>, Vec<PeelStep>)> {
    let as_patterns: Vec<Pattern> = patterns.iter().map(|p| Pattern(p.clone())).collect();
    let lines = LineIndex::new(&as_patterns, n);
    let (line_of, members, _, _) = lines.into_parts();
    let mut live: Vec<usize> = members.iter().map(Vec::len).collect();
    let mut alive = vec![true; patterns.len()];
    let mut ordering = Vec::with_capacity(patterns.len());
    let mut steps = Vec::with_capacity(patterns.len());
    for _ in 0..patterns.len() {
        let found = (0..patterns.len())
            .filter(|&p| alive[p])
            .flat_map(|p| (0..n).map(move |i| (p, i)))
            .find(|&(p, i)| live[line_of[p * n + i]] <= ell);
        let Some((p, i)) = found else {
            return Err(Error::Precondition(format!(
                "{} remaining patterns form an (ℓ+1)-pseudo-cube; no deficient pattern",
                patterns.len() - ordering.len()
            )));
        };
        let mut values: Vec<Label> = members[line_of[p * n + i]]
            .iter()
            .filter(|&&q| q != p && alive[q])
            .map(|&q| patterns[q][i])
            .collect();
        values.sort_unstable();
        alive[p] = false;
        for j in 0..n {
            live[line_of[p * n + j]] -= 1;
        }
        ordering.push(p);
        steps.push(PeelStep { direction: Some(i), values });
    }
    Ok((ordering, steps))
}

/// Peeling order with per-step witnesses (requires `n > d`).
pub fn peeling_order(h: &HypothesisClass, ell: usize, d: usize) -> Result<Certificate> {
    h.require_nonempty()?;
    check_ell_d(h, ell, d)?;
    if h.n() <= d {
        return Err(Error::Precondition(format!("peeling needs n > d (n = {}, d = {d})", h.n())));
    }
    let raw: Vec<Vec<Label>> = h.patterns().iter().map(|p| p.0.clone()).collect();
    let (ordering, steps) = peel_sequence(&raw, h.n(), ell)?;
    Ok(Certificate {
        n: h.n(),
        k: h.k(),
        ell,
        d,
        patterns: h.patterns().to_vec(),
        ordering,
        steps,
        q_polys: None,
        eval_matrix: None,
    })
}

/// Triangular basis of one projection level.
struct Level {
    /// Distinct patterns of the projection, sorted.
    patterns: Vec<Vec<Label>>,
    ordering: Vec<usize>,
    steps: Vec<PeelStep>,
    /// `q[t]` belongs to `patterns[ordering[t]]`.
    q: Vec<RationalPolynomial>,
    /// `eval[t][s] = q[t](patterns[ordering[s]])`.
    eval: Vec<Vec<BigRational>>,
}

impl Level {
    /// Polynomial equal to 1 at `target` and 0 on every other pattern of the
    /// level, as a combination of the level's triangular basis.
    fn indicator(&self, target: &[Label]) -> RationalPolynomial {
        let m = self.ordering.len();
        let pos = self
            .ordering
            .iter()
            .position(|&p| self.patterns[p] == target)
            .expect("target lies in the projection");
        // Solve Σ_a c_a q_a(h_b) = δ_{b,pos}; q_a vanishes on h_b for b > a.
        let mut c = vec![BigRational::zero(); m];
        for b in (0..m).rev() {
            let mut v = if b == pos { BigRational::one() } else { BigRational::zero() };
            for (a, ca) in c.iter().enumerate().skip(b + 1) {
                if !ca.is_zero() {
                    v -= ca * &self.eval[a][b];
                }
            }
            c[b] = v;
        }
        let n = self.q.first().map_or(0, RationalPolynomial::n);
        let mut out = RationalPolynomial::zero(n);
        for (a, ca) in c.iter().enumerate() {
            if !ca.is_zero() {
                out.add_scaled(&self.q[a], ca);
            }
        }
        out
    }
}

struct Replay<'a> {
    h: &'a HypothesisClass,
    ell: usize,
    d: usize,
    memo: HashMap<Vec<usize>, Level>,
}

impl Replay<'_> {
    /// Builds (and memoizes) the level for the projection onto `coords`.
    fn level(&mut self, coords: &[usize]) -> Result<()> {
        if self.memo.contains_key(coords) {
            return Ok(());
        }
        let mut patterns: Vec<Vec<Label>> = self.h.patterns().iter().map(|p| p.restrict(coords).0).collect();
        patterns.sort_unstable();
        patterns.dedup();
        let n = coords.len();
        let k = self.h.k();

        let (ordering, steps, q) = if n <= self.d {
            let q = patterns.iter().map(|p| indicator_poly(p, k)).collect();
            let steps = vec![PeelStep { direction: None, values: Vec::new() }; patterns.len()];
            ((0..patterns.len()).collect::<Vec<_>>(), steps, q)
        } else {
            let (ordering, steps) = peel_sequence(&patterns, n, self.ell)?;
            let mut q = Vec::with_capacity(ordering.len());
            for (&p, step) in ordering.iter().zip(&steps) {
                let i = step.direction.expect("peeling steps carry a direction");
                let sub: Vec<usize> = coords.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &c)| c).collect();
                self.level(&sub)?;
                let mut target = patterns[p].clone();
                let hi = target.remove(i);
                let mut poly = self.memo[&sub].indicator(&target).embed(i);
                for &j in &step.values {
                    poly = poly.mul(&RationalPolynomial::lagrange_factor(n, i, j, hi));
                }
                q.push(poly);
            }
            (ordering, steps, q)
        };
        let eval = q
            .iter()
            .map(|qt| ordering.iter().map(|&s| qt.eval(&patterns[s])).collect())
            .collect();
        self.memo.insert(coords.to_vec(), Level { patterns, ordering, steps, q, eval });
        Ok(())
    }
}

/// Replays the inductive construction: a peeling order of `H` with
/// polynomials `Q_t` such that `Q_t(h_t) = 1` and `Q_t(h_s) = 0` for `s > t`,
/// each supported on `monomial_set(n, k, ℓ, d)`.
pub fn construct_q(h: &HypothesisClass, ell: usize, d: usize, cap: u128) -> Result<Certificate> {
    h.require_nonempty()?;
    check_ell_d(h, ell, d)?;
    check_cap("polynomial replay terms", cube_size(h.n(), h.k()).saturating_mul(h.len() as u128), cap)?;
    let true_d = ds_dimension(h, ell)?.value;
    if d < true_d {
        return Err(Error::Precondition(format!("d = {d} is below the DS dimension {true_d}")));
    }
    let all: Vec<usize> = (0..h.n()).collect();
    let mut replay = Replay { h, ell, d, memo: HashMap::new() };
    replay.level(&all)?;
    let top = replay.memo.remove(&all).expect("top level built");
    let cert = Certificate {
        n: h.n(),
        k: h.k(),
        ell,
        d,
        patterns: top.patterns.into_iter().map(Pattern).collect(),
        ordering: top.ordering,
        steps: top.steps,
        q_polys: Some(top.q),
        eval_matrix: Some(top.eval),
    };
    let check = verify_certificate(&cert);
    if !check.is_valid() {
        return Err(Error::Verification(format!("replayed certificate failed its own check: {check:?}")));
    }
    Ok(cert)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CertificateCheck {
    /// The ordering is a permutation of the patterns.
    pub ordering_valid: bool,
    /// Every step's direction and neighbour values match the remaining class.
    pub witnesses_valid: bool,
    /// The stored matrix matches the polynomials (vacuous without them).
    pub matrix_consistent: bool,
    /// `A[t][t] = 1` and `A[t][s] = 0` for `s > t`.
    pub unit_triangular: bool,
    /// Every polynomial is supported on the admissible monomials.
    pub support_ok: bool,
}

impl CertificateCheck {
    pub fn is_valid(&self) -> bool {
        self.ordering_valid && self.witnesses_valid && self.matrix_consistent && self.unit_triangular && self.support_ok
    }
}

/// Re-checks a certificate from its own contents.
pub fn verify_certificate(cert: &Certificate) -> CertificateCheck {
    let m = cert.patterns.len();
    let mut check = CertificateCheck {
        ordering_valid: false,
        witnesses_valid: false,
        matrix_consistent: true,
        unit_triangular: true,
        support_ok: true,
    };
    let mut seen = vec![false; m];
    check.ordering_valid = cert.ordering.len() == m
        && cert.steps.len() == m
        && cert.patterns.iter().all(|p| p.len() == cert.n && p.iter().all(|&l| l < cert.k))
        && cert.ordering.iter().all(|&p| p < m && !std::mem::replace(&mut seen[p], true));
    if !check.ordering_valid {
        check.witnesses_valid = false;
        check.matrix_consistent = false;
        check.unit_triangular = false;
        check.support_ok = false;
        return check;
    }

    check.witnesses_valid = cert.steps.iter().enumerate().all(|(t, step)| {
        let p = &cert.patterns[cert.ordering[t]];
        match step.direction {
            None => cert.n <= cert.d && step.values.is_empty(),
            Some(i) if i < cert.n && cert.n > cert.d => {
                let mut values: Vec<Label> = cert.ordering[t + 1..]
                    .iter()
                    .map(|&q| &cert.patterns[q])
                    .filter(|q| (0..cert.n).all(|j| j == i || q[j] == p[j]))
                    .map(|q| q[i])
                    .collect();
                values.sort_unstable();
                values == step.values && values.len() < cert.ell
            }
            Some(_) => false,
        }
    });

    if let Some(qs) = &cert.q_polys {
        let ordered: Vec<&Pattern> = cert.ordering.iter().map(|&p| &cert.patterns[p]).collect();
        let matrix: Vec<Vec<BigRational>> = qs
            .iter()
            .map(|q| {
                if q.n() != cert.n {
                    return Vec::new();
                }
                ordered.iter().map(|p| q.eval(p)).collect()
            })
            .collect();
        check.support_ok = qs.len() == m
            && qs.iter().all(|q| q.n() == cert.n && q.terms().keys().all(|e| admissible(e, cert.k, cert.ell, cert.d)));
        check.matrix_consistent = matrix.iter().all(|r| r.len() == m)
            && cert.eval_matrix.as_ref().map_or(true, |stored| *stored == matrix);
        check.unit_triangular = check.matrix_consistent
            && matrix.len() == m
            && matrix.iter().enumerate().all(|(t, row)| {
                row[t].is_one() && row[t + 1..].iter().all(Zero::is_zero)
            });
    } else if cert.eval_matrix.is_some() {
        check.matrix_consistent = false;
        check.unit_triangular = false;
    }
    check
}
