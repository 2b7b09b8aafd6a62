//! Homotopy letters, strings and bands.
//!
//! Letters are stored in application order `w_1, ..., w_n`. The textual syntax
//! lists them the other way round (`w_n, ..., w_1`), matching how composites
//! are written.

use crate::error::{GentleError, Result};
use crate::presentation::{GentleAlgebra, PathId, VertexId};
use std::cmp::Ordering;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HomotopyLetter {
    pub path: PathId,
    pub inverse: bool,
}

impl HomotopyLetter {
    pub fn direct(path: PathId) -> Self {
        HomotopyLetter { path, inverse: false }
    }

    pub fn inverted(self) -> Self {
        HomotopyLetter { path: self.path, inverse: !self.inverse }
    }

    pub fn start(&self, alg: &GentleAlgebra) -> VertexId {
        let p = alg.path(self.path);
        if self.inverse { p.target } else { p.source }
    }

    pub fn end(&self, alg: &GentleAlgebra) -> VertexId {
        let p = alg.path(self.path);
        if self.inverse { p.source } else { p.target }
    }

    pub fn s_sign(&self, alg: &GentleAlgebra) -> i8 {
        if self.inverse { alg.path_e_prime(self.path) } else { alg.path_s_prime(self.path) }
    }

    pub fn e_sign(&self, alg: &GentleAlgebra) -> i8 {
        if self.inverse { alg.path_s_prime(self.path) } else { alg.path_e_prime(self.path) }
    }

    pub fn expr(&self, alg: &GentleAlgebra) -> String {
        let base = alg.path(self.path).arrows.iter().rev().map(|&a| alg.arrow_name(a)).collect::<Vec<_>>().join("*");
        if self.inverse { format!("{base}^-1") } else { base }
    }
}

/// Checks that `next` may follow `prev`; returns a diagnostic otherwise.
pub fn composable(alg: &GentleAlgebra, prev: HomotopyLetter, next: HomotopyLetter) -> std::result::Result<(), String> {
    if prev.end(alg) != next.start(alg) {
        return Err(format!(
            "{} ends at {} but {} starts at {}",
            prev.expr(alg),
            alg.vertex_name(prev.end(alg)),
            next.expr(alg),
            alg.vertex_name(next.start(alg))
        ));
    }
    let (e, s) = (prev.e_sign(alg), next.s_sign(alg));
    if prev.inverse == next.inverse {
        if e != s {
            return Err(format!(
                "same-direction letters {} then {} need equal end/start signs, got {e:+} and {s:+}",
                prev.expr(alg),
                next.expr(alg)
            ));
        }
    } else if e != -s {
        return Err(format!(
            "mixed-direction letters {} then {} need opposite end/start signs, got {e:+} and {s:+}",
            prev.expr(alg),
            next.expr(alg)
        ));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HomotopyString {
    pub letters: Vec<HomotopyLetter>,
    /// Vertex and sign of a trivial string; `None` when letters are present.
    pub trivial: Option<(VertexId, i8)>,
}

impl HomotopyString {
    pub fn trivial(v: VertexId, eps: i8) -> Self {
        HomotopyString { letters: Vec::new(), trivial: Some((v, eps)) }
    }

    /// Validates composability of consecutive letters.
    pub fn new(alg: &GentleAlgebra, letters: Vec<HomotopyLetter>) -> Result<Self> {
        if letters.is_empty() {
            return Err(GentleError::Word("empty letter list".into()));
        }
        for l in &letters {
            if alg.is_trivial(l.path) {
                return Err(GentleError::Word("a letter must be a nontrivial permitted path".into()));
            }
        }
        for pair in letters.windows(2) {
            composable(alg, pair[0], pair[1]).map_err(GentleError::Word)?;
        }
        Ok(HomotopyString { letters, trivial: None })
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn start(&self, alg: &GentleAlgebra) -> VertexId {
        match self.trivial {
            Some((v, _)) => v,
            None => self.letters[0].start(alg),
        }
    }

    pub fn end(&self, alg: &GentleAlgebra) -> VertexId {
        match self.trivial {
            Some((v, _)) => v,
            None => self.letters.last().unwrap().end(alg),
        }
    }

    pub fn degree(&self) -> i32 {
        self.letters.iter().map(|l| if l.inverse { -1 } else { 1 }).sum()
    }

    /// Running degree at positions `0..=n`, starting from 0.
    pub fn degree_profile(&self) -> Vec<i32> {
        running_degrees(&self.letters)
    }

    pub fn inverse(&self) -> Self {
        match self.trivial {
            Some((v, e)) => HomotopyString::trivial(v, -e),
            None => HomotopyString {
                letters: self.letters.iter().rev().map(|l| l.inverted()).collect(),
                trivial: None,
            },
        }
    }

    pub fn expr(&self, alg: &GentleAlgebra) -> String {
        match self.trivial {
            Some((v, e)) => format!("triv:{}:{:+}", alg.vertex_name(v), e),
            None => self.letters.iter().rev().map(|l| l.expr(alg)).collect::<Vec<_>>().join(", "),
        }
    }
}

pub(crate) fn running_degrees(letters: &[HomotopyLetter]) -> Vec<i32> {
    let mut out = vec![0];
    for l in letters {
        let d = *out.last().unwrap();
        out.push(if l.inverse { d + 1 } else { d - 1 });
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HomotopyBand {
    pub letters: Vec<HomotopyLetter>,
}

fn is_proper_power(letters: &[HomotopyLetter]) -> bool {
    let n = letters.len();
    (1..n).any(|p| n.is_multiple_of(p) && (p..n).all(|i| letters[i] == letters[i - p]))
}

impl HomotopyBand {
    pub fn new(alg: &GentleAlgebra, letters: Vec<HomotopyLetter>) -> Result<Self> {
        let s = HomotopyString::new(alg, letters)?;
        let degree = s.degree();
        let letters = s.letters;
        if degree != 0 {
            return Err(GentleError::Word(format!("band must have degree 0, got {degree}")));
        }
        let (first, last) = (letters[0], *letters.last().unwrap());
        if last.end(alg) != first.start(alg) {
            return Err(GentleError::Word("band must start and end at the same vertex".into()));
        }
        composable(alg, last, first).map_err(|e| GentleError::Word(format!("wrap-around pair: {e}")))?;
        if first.inverse == last.inverse {
            return Err(GentleError::Word("first and last letters of a band must have opposite directions".into()));
        }
        if is_proper_power(&letters) {
            return Err(GentleError::Word("band is a proper power of a shorter string".into()));
        }
        Ok(HomotopyBand { letters })
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn degree_profile(&self) -> Vec<i32> {
        running_degrees(&self.letters)
    }

    pub fn inverse(&self) -> Self {
        HomotopyBand { letters: self.letters.iter().rev().map(|l| l.inverted()).collect() }
    }

    pub fn expr(&self, alg: &GentleAlgebra) -> String {
        let body = self.letters.iter().rev().map(|l| l.expr(alg)).collect::<Vec<_>>().join(", ");
        format!("band: {body}")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Word {
    String(HomotopyString),
    Band(HomotopyBand),
}

fn parse_letter(alg: &GentleAlgebra, text: &str) -> Result<HomotopyLetter> {
    let text = text.trim();
    let (body, inverse) = match text.strip_suffix("^-1") {
        Some(b) => (b.trim(), true),
        None => (text, false),
    };
    if body.is_empty() {
        return Err(GentleError::Word("empty letter".into()));
    }
    let mut arrows = Vec::new();
    for name in body.split('*').rev() {
        let name = name.trim();
        let a = alg
            .presentation()
            .arrow_id(name)
            .ok_or_else(|| GentleError::Word(format!("unknown arrow '{name}'")))?;
        arrows.push(a);
    }
    for pair in arrows.windows(2) {
        if alg.arrow(pair[0]).target != alg.arrow(pair[1]).source {
            return Err(GentleError::Word(format!("'{body}' is not a path")));
        }
        if alg.is_relation(pair[1], pair[0]) {
            return Err(GentleError::Word(format!(
                "'{body}' lies in I ({} {} is a relation)",
                alg.arrow_name(pair[1]),
                alg.arrow_name(pair[0])
            )));
        }
    }
    let path = alg
        .path_of_arrows(&arrows)
        .ok_or_else(|| GentleError::Word(format!("'{body}' is not a permitted path")))?;
    Ok(HomotopyLetter { path, inverse })
}

/// Parses a word expression: letters `w_n, ..., w_1`, `triv:<v>:<+1|-1>`, or
/// a `band:` prefixed cyclic word.
pub fn parse_word(alg: &GentleAlgebra, expr: &str) -> Result<Word> {
    let expr = expr.trim();
    if let Some(rest) = expr.strip_prefix("triv:") {
        let (v, e) = rest
            .rsplit_once(':')
            .ok_or_else(|| GentleError::Word("trivial string needs the form triv:<vertex>:<+1|-1>".into()))?;
        let v = alg
            .presentation()
            .vertex_id(v.trim())
            .ok_or_else(|| GentleError::Word(format!("unknown vertex '{v}'")))?;
        let eps = match e.trim() {
            "+1" | "1" => 1,
            "-1" => -1,
            other => return Err(GentleError::Word(format!("bad sign '{other}'"))),
        };
        return Ok(Word::String(HomotopyString::trivial(v, eps)));
    }
    let (band, body) = match expr.strip_prefix("band:") {
        Some(b) => (true, b),
        None => (false, expr),
    };
    let mut letters = body.split(',').map(|t| parse_letter(alg, t)).collect::<Result<Vec<_>>>()?;
    letters.reverse();
    if band {
        Ok(Word::Band(HomotopyBand::new(alg, letters)?))
    } else {
        Ok(Word::String(HomotopyString::new(alg, letters)?))
    }
}

/// Parses a word expression that must be a string.
pub fn parse_string(alg: &GentleAlgebra, expr: &str) -> Result<HomotopyString> {
    match parse_word(alg, expr)? {
        Word::String(s) => Ok(s),
        Word::Band(_) => Err(GentleError::Word("expected a string, got a band".into())),
    }
}

/// Parses a word expression that must be a band.
pub fn parse_band(alg: &GentleAlgebra, expr: &str) -> Result<HomotopyBand> {
    let expr = expr.trim();
    let expr = if expr.starts_with("band:") { expr.to_string() } else { format!("band: {expr}") };
    match parse_word(alg, &expr)? {
        Word::Band(b) => Ok(b),
        Word::String(_) => unreachable!(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum WordKey {
    Trivial(VertexId),
    Letters(Vec<(PathId, bool)>),
}

fn encode(letters: &[HomotopyLetter]) -> Vec<(PathId, bool)> {
    letters.iter().map(|l| (l.path, l.inverse)).collect()
}

/// Equal keys exactly when the strings agree up to inversion.
pub fn canonical_string(w: &HomotopyString) -> WordKey {
    match w.trivial {
        Some((v, _)) => WordKey::Trivial(v),
        None => {
            let a = encode(&w.letters);
            let b = encode(&w.inverse().letters);
            WordKey::Letters(if a <= b { a } else { b })
        }
    }
}

/// True when `w` is the representative chosen by [`canonical_string`].
pub fn is_canonical(w: &HomotopyString) -> bool {
    match w.trivial {
        Some((_, e)) => e == 1,
        None => encode(&w.letters).cmp(&encode(&w.inverse().letters)) != Ordering::Greater,
    }
}

/// Minimum over valid rotations and inversion.
pub fn canonical_band(w: &HomotopyBand) -> WordKey {
    let mut best: Option<Vec<(PathId, bool)>> = None;
    for letters in [w.letters.clone(), w.inverse().letters] {
        let n = letters.len();
        for r in 0..n {
            let rot: Vec<HomotopyLetter> = (0..n).map(|i| letters[(i + r) % n]).collect();
            if rot[0].inverse == rot[n - 1].inverse {
                continue;
            }
            let enc = encode(&rot);
            if best.as_ref().is_none_or(|b| enc < *b) {
                best = Some(enc);
            }
        }
    }
    WordKey::Letters(best.expect("a band has at least one valid rotation"))
}

/// All letters of the algebra, direct and inverse.
pub fn all_letters(alg: &GentleAlgebra) -> Vec<HomotopyLetter> {
    let mut out = Vec::new();
    for p in 0..alg.dim() {
        if !alg.is_trivial(p) {
            out.push(HomotopyLetter { path: p, inverse: false });
            out.push(HomotopyLetter { path: p, inverse: true });
        }
    }
    out
}

/// Walks all homotopy strings with at most `max_letters` letters in
/// depth-first order, both orientations of each, trivial strings first. The
/// flag says whether the string is the canonical member of its class; when
/// `visit` returns `false` the strings extending the current one on the right
/// are skipped.
pub fn visit_strings<F>(alg: &GentleAlgebra, max_letters: usize, mut visit: F)
where
    F: FnMut(&HomotopyString, bool) -> bool,
{
    for v in 0..alg.num_vertices() {
        for e in [1, -1] {
            visit(&HomotopyString::trivial(v, e), e == 1);
        }
    }
    let letters = all_letters(alg);
    let follow: Vec<Vec<usize>> = letters
        .iter()
        .map(|&a| (0..letters.len()).filter(|&b| composable(alg, a, letters[b]).is_ok()).collect())
        .collect();
    let mut stack: Vec<Vec<usize>> = (0..letters.len()).rev().map(|l| vec![l]).collect();
    while let Some(word) = stack.pop() {
        let s = HomotopyString { letters: word.iter().map(|&l| letters[l]).collect(), trivial: None };
        if visit(&s, is_canonical(&s)) && word.len() < max_letters {
            for &b in follow[*word.last().unwrap()].iter().rev() {
                let mut w = word.clone();
                w.push(b);
                stack.push(w);
            }
        }
    }
}

/// Every homotopy string with at most `max_letters` letters, one per class up
/// to inversion, trivial strings included.
pub fn enumerate_strings(alg: &GentleAlgebra, max_letters: usize) -> Vec<HomotopyString> {
    let mut out = Vec::new();
    visit_strings(alg, max_letters, |w, canonical| {
        if canonical {
            out.push(w.clone());
        }
        true
    });
    out
}
