//! Finite hypothesis classes over a `k`-letter alphabet.
//!
//! A class is a set of distinct label vectors of common length `n`, with every
//! label in `0..k`. Patterns are kept sorted lexicographically, so the class
//! has a single canonical serialization.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Label = u32;

/// Default limit on the number of patterns an exhaustive routine may enumerate.
pub const DEFAULT_ENUMERATION_CAP: u128 = 1 << 24;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Pattern(pub Vec<Label>);

impl Pattern {
    pub fn new(labels: Vec<Label>) -> Self {
        Pattern(labels)
    }

    pub fn labels(&self) -> &[Label] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Labels at the given coordinates, in the given order.
    pub fn restrict(&self, coords: &[usize]) -> Pattern {
        Pattern(coords.iter().map(|&c| self.0[c]).collect())
    }
}

impl std::ops::Deref for Pattern {
    type Target = [Label];
    fn deref(&self) -> &[Label] {
        &self.0
    }
}

impl From<Vec<Label>> for Pattern {
    fn from(v: Vec<Label>) -> Self {
        Pattern(v)
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{l}")?;
        }
        write!(f, ")")
    }
}

/// Strictly increasing set of coordinate indices below some `n`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CoordinateSet(Vec<usize>);

impl CoordinateSet {
    pub fn new(indices: Vec<usize>, n: usize) -> Result<Self> {
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParameter(format!(
                "coordinate indices must be strictly increasing: {indices:?}"
            )));
        }
        if let Some(&last) = indices.last() {
            if last >= n {
                return Err(Error::InvalidParameter(format!(
                    "coordinate {last} out of range for n = {n}"
                )));
            }
        }
        Ok(CoordinateSet(indices))
    }

    pub fn empty() -> Self {
        CoordinateSet(Vec::new())
    }

    pub fn all(n: usize) -> Self {
        CoordinateSet((0..n).collect())
    }

    /// Every coordinate of `0..n` except `skip`.
    pub fn without(n: usize, skip: usize) -> Self {
        CoordinateSet((0..n).filter(|&c| c != skip).collect())
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `S[T]`: the members of `self` at the positions listed in `positions`.
    pub fn select(&self, positions: &CoordinateSet) -> Result<CoordinateSet> {
        if positions.0.last().is_some_and(|&p| p >= self.0.len()) {
            return Err(Error::InvalidParameter(
                "selector position outside the coordinate set".into(),
            ));
        }
        Ok(CoordinateSet(positions.0.iter().map(|&p| self.0[p]).collect()))
    }
}

impl fmt::Display for CoordinateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "}}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HypothesisClass {
    n: usize,
    k: Label,
    patterns: Vec<Pattern>,
}

impl HypothesisClass {
    /// Validates dimensions and labels; duplicate patterns are an error.
    pub fn new(n: usize, k: Label, patterns: Vec<Pattern>) -> Result<Self> {
        check_shape(n, k)?;
        for (i, p) in patterns.iter().enumerate() {
            check_pattern(p, n, k).map_err(|m| {
                Error::InvalidParameter(format!("pattern #{i} {p}: {m}"))
            })?;
        }
        let mut sorted = patterns;
        sorted.sort_unstable();
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidParameter(format!("duplicate pattern {}", w[0])));
        }
        Ok(HypothesisClass { n, k, patterns: sorted })
    }

    /// Like [`HypothesisClass::new`] but collapses duplicates instead of rejecting them.
    pub fn from_patterns(n: usize, k: Label, patterns: Vec<Pattern>) -> Result<Self> {
        check_shape(n, k)?;
        for p in &patterns {
            check_pattern(p, n, k).map_err(|m| Error::InvalidParameter(format!("{p}: {m}")))?;
        }
        Ok(Self::from_trusted(n, k, patterns))
    }

    /// Skips label validation. Callers guarantee shape and range.
    pub(crate) fn from_trusted(n: usize, k: Label, mut patterns: Vec<Pattern>) -> Self {
        patterns.sort_unstable();
        patterns.dedup();
        HypothesisClass { n, k, patterns }
    }

    pub fn empty(n: usize, k: Label) -> Result<Self> {
        check_shape(n, k)?;
        Ok(HypothesisClass { n, k, patterns: Vec::new() })
    }

    /// The full cube `[k]^n`.
    pub fn full_cube(n: usize, k: Label, cap: u128) -> Result<Self> {
        check_shape(n, k)?;
        check_cap("full cube", cube_size(n, k), cap)?;
        Ok(HypothesisClass { n, k, patterns: words(n, k).collect() })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> Label {
        self.k
    }

    pub fn len(&self) -> usize {
        self.patterns.len()
    }

    /// Empty classes are representable but most operations reject them.
    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }

    pub fn patterns(&self) -> &[Pattern] {
        &self.patterns
    }

    pub fn index_of(&self, p: &[Label]) -> Option<usize> {
        self.patterns.binary_search_by(|q| q.0.as_slice().cmp(p)).ok()
    }

    pub fn contains(&self, p: &[Label]) -> bool {
        self.index_of(p).is_some()
    }

    pub fn is_subset_of(&self, other: &HypothesisClass) -> bool {
        self.patterns.iter().all(|p| other.contains(p))
    }

    pub(crate) fn require_nonempty(&self) -> Result<()> {
        if self.is_empty() {
            Err(Error::EmptyClass)
        } else {
            Ok(())
        }
    }

    /// Distinct restrictions to `coords` (any order, repeats allowed).
    /// The result has `n = coords.len()`.
    pub fn restrict(&self, coords: &[usize]) -> Result<HypothesisClass> {
        if coords.is_empty() {
            return Err(Error::InvalidParameter("empty coordinate sequence".into()));
        }
        if let Some(&c) = coords.iter().find(|&&c| c >= self.n) {
            return Err(Error::InvalidParameter(format!(
                "coordinate {c} out of range for n = {}",
                self.n
            )));
        }
        let patterns = self.patterns.iter().map(|p| p.restrict(coords)).collect();
        Ok(Self::from_trusted(coords.len(), self.k, patterns))
    }

    /// Projection onto a coordinate set; duplicates collapse.
    pub fn project(&self, coords: &CoordinateSet) -> Result<HypothesisClass> {
        if coords.indices().last().is_some_and(|&c| c >= self.n) {
            return Err(Error::InvalidParameter(format!(
                "coordinate set {coords} out of range for n = {}",
                self.n
            )));
        }
        self.restrict(coords.indices())
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("n={} k={}\n", self.n, self.k);
        for p in &self.patterns {
            let row: Vec<String> = p.iter().map(|l| l.to_string()).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        let doc = ClassJson {
            n: self.n,
            k: self.k,
            patterns: self.patterns.iter().map(|p| p.0.clone()).collect(),
        };
        serde_json::to_string(&doc).expect("class serializes")
    }

    pub fn serialize(&self, format: ClassFormat) -> String {
        match format {
            ClassFormat::Text => self.to_text(),
            ClassFormat::Json => self.to_json(),
        }
    }
}

impl fmt::Display for HypothesisClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, p) in self.patterns.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "}}")
    }
}

fn check_shape(n: usize, k: Label) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be positive".into()));
    }
    if k < 2 {
        return Err(Error::InvalidParameter("k must be at least 2".into()));
    }
    Ok(())
}

fn check_pattern(p: &Pattern, n: usize, k: Label) -> std::result::Result<(), String> {
    if p.len() != n {
        return Err(format!("wrong row length {} (expected {n})", p.len()));
    }
    if let Some(l) = p.iter().find(|&&l| l >= k) {
        return Err(format!("label out of range: {l} (k = {k})"));
    }
    Ok(())
}

pub(crate) fn check_cap(what: &'static str, size: u128, cap: u128) -> Result<()> {
    if size > cap {
        Err(Error::CapExceeded { what, size, cap })
    } else {
        Ok(())
    }
}

/// `k^n`, saturating at `u128::MAX`.
pub fn cube_size(n: usize, k: Label) -> u128 {
    let mut size: u128 = 1;
    for _ in 0..n {
        size = size.saturating_mul(k as u128);
    }
    size
}

/// All words of `[k]^n` in lexicographic order.
pub fn words(n: usize, k: Label) -> impl Iterator<Item = Pattern> {
    let mut next = Some(vec![0 as Label; n]);
    std::iter::from_fn(move || {
        let current = next.take()?;
        let mut succ = current.clone();
        let mut pos = n;
        while pos > 0 {
            pos -= 1;
            if succ[pos] + 1 < k {
                succ[pos] += 1;
                next = Some(succ);
                break;
            }
            succ[pos] = 0;
        }
        Some(Pattern(current))
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ClassFormat {
    #[default]
    Text,
    Json,
}

impl FromStr for ClassFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "text" | "cls" => Ok(ClassFormat::Text),
            "json" => Ok(ClassFormat::Json),
            other => Err(Error::InvalidParameter(format!("unknown class format `{other}`"))),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct ClassJson {
    n: usize,
    k: Label,
    patterns: Vec<Vec<Label>>,
}

/// Parses either format, choosing JSON when the document starts with `{`.
pub fn parse_class_auto(text: &str) -> Result<HypothesisClass> {
    if text.trim_start().starts_with('{') {
        parse_class(text, ClassFormat::Json)
    } else {
        parse_class(text, ClassFormat::Text)
    }
}

pub fn parse_class(text: &str, format: ClassFormat) -> Result<HypothesisClass> {
    match format {
        ClassFormat::Text => parse_text(text),
        ClassFormat::Json => parse_json(text),
    }
}

fn parse_json(text: &str) -> Result<HypothesisClass> {
    let doc: ClassJson = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        message: e.to_string(),
    })?;
    let patterns = doc.patterns.into_iter().map(Pattern).collect();
    HypothesisClass::new(doc.n, doc.k, patterns)
}

fn parse_text(text: &str) -> Result<HypothesisClass> {
    let mut header: Option<(usize, Label)> = None;
    let mut rows: Vec<(usize, Pattern)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((n, k)) = header else {
            header = Some(parse_header(line).map_err(|message| Error::Parse { line: line_no, message })?);
            continue;
        };
        let labels = line
            .split_whitespace()
            .map(|tok| {
                tok.parse::<Label>().map_err(|_| Error::Parse {
                    line: line_no,
                    message: format!("not a label: `{tok}`"),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let p = Pattern(labels);
        check_pattern(&p, n, k).map_err(|message| Error::Parse { line: line_no, message })?;
        rows.push((line_no, p));
    }
    let (n, k) = header.ok_or(Error::Parse { line: 0, message: "missing `n=<int> k=<int>` header".into() })?;

    let mut sorted: Vec<&(usize, Pattern)> = rows.iter().collect();
    sorted.sort_by(|a, b| a.1.cmp(&b.1).then(a.0.cmp(&b.0)));
    if let Some(w) = sorted.windows(2).find(|w| w[0].1 == w[1].1) {
        return Err(Error::Parse {
            line: w[1].0,
            message: format!("duplicate pattern {} (first seen on line {})", w[1].1, w[0].0),
        });
    }
    HypothesisClass::new(n, k, rows.into_iter().map(|(_, p)| p).collect())
}

fn parse_header(line: &str) -> std::result::Result<(usize, Label), String> {
    let mut n = None;
    let mut k = None;
    for tok in line.split_whitespace() {
        let (key, value) = tok
            .split_once('=')
            .ok_or_else(|| format!("malformed header token `{tok}`"))?;
        let value: u64 = value
            .parse()
            .map_err(|_| format!("malformed header value `{tok}`"))?;
        match key {
            "n" if n.is_none() => n = Some(value as usize),
            "k" if k.is_none() => k = Some(value as Label),
            _ => return Err(format!("malformed header token `{tok}`")),
        }
    }
    match (n, k) {
        (Some(n), Some(k)) if n >= 1 && k >= 2 => Ok((n, k)),
        (Some(_), Some(_)) => Err("header needs n >= 1 and k >= 2".into()),
        _ => Err("malformed header: expected `n=<int> k=<int>`".into()),
    }
}

/// Includes each word of `[k]^n` independently with probability `density`.
pub fn random_class(n: usize, k: Label, density: f64, seed: u64, cap: u128) -> Result<HypothesisClass> {
    check_shape(n, k)?;
    if !(0.0..=1.0).contains(&density) {
        return Err(Error::InvalidParameter(format!("density {density} not in [0,1]")));
    }
    check_cap("random class enumeration", cube_size(n, k), cap)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let patterns = words(n, k).filter(|_| rng.gen_bool(density)).collect();
    Ok(HypothesisClass { n, k, patterns })
}

/// Every nonempty subclass of `[k]^n`, indexed by the bitmask over the
/// lexicographic word order. Only meant for tiny cubes.
pub fn all_nonempty_classes(n: usize, k: Label) -> Result<Vec<HypothesisClass>> {
    check_shape(n, k)?;
    let size = cube_size(n, k);
    check_cap("exhaustive class sweep", size, 20)?;
    let cube: Vec<Pattern> = words(n, k).collect();
    Ok((1u32..(1u32 << size))
        .map(|mask| {
            let patterns = cube
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, p)| p.clone())
                .collect();
            HypothesisClass { n, k, patterns }
        })
        .collect())
}
