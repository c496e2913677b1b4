//! Words of the free semigroup, kept in run-length canonical form.
//!
//! A word `x₁^{t₁} x₂^{t₂} ⋯ x_k^{t_k}` is stored as its runs; adjacent runs
//! never share a variable and every exponent is positive. Factor and subword
//! queries work on the flattened letter sequence.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};

/// A variable of the free semigroup, identified by its name.
///
/// Names are an ASCII letter optionally followed by digits (`x`, `y`, `y1`).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Variable(Arc<str>);

impl Variable {
    pub fn new(name: &str) -> Result<Self> {
        let mut chars = name.chars();
        let ok = matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
            && chars.all(|c| c.is_ascii_digit());
        if !ok {
            return Err(Error::ParseWord {
                input: name.to_string(),
                reason: "a variable is a letter optionally followed by digits".into(),
            });
        }
        Ok(Variable(Arc::from(name)))
    }

    /// Panicking shorthand for names known to be valid.
    pub fn named(name: &str) -> Self {
        Self::new(name).expect("valid variable name")
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Run {
    pub var: Variable,
    pub exp: u32,
}

/// A word in canonical run-length form. The empty word is `e`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Word {
    runs: Vec<Run>,
}

impl Word {
    pub fn empty() -> Self {
        Word::default()
    }

    pub fn letter(var: &Variable) -> Self {
        Self::power(var, 1)
    }

    pub fn power(var: &Variable, exp: u32) -> Self {
        let mut w = Word::empty();
        w.push(var, exp);
        w
    }

    pub fn from_letters<'a>(letters: impl IntoIterator<Item = &'a Variable>) -> Self {
        let mut w = Word::empty();
        for v in letters {
            w.push(v, 1);
        }
        w
    }

    /// Builds a word from arbitrary runs, merging equal neighbours and
    /// dropping zero exponents.
    pub fn from_runs(runs: impl IntoIterator<Item = (Variable, u32)>) -> Self {
        let mut w = Word::empty();
        for (v, e) in runs {
            w.push(&v, e);
        }
        w
    }

    /// Appends `var^exp`, merging with the last run when the variable matches.
    pub fn push(&mut self, var: &Variable, exp: u32) {
        if exp == 0 {
            return;
        }
        match self.runs.last_mut() {
            Some(last) if last.var == *var => last.exp += exp,
            _ => self.runs.push(Run {
                var: var.clone(),
                exp,
            }),
        }
    }

    pub fn runs(&self) -> &[Run] {
        &self.runs
    }

    pub fn is_empty(&self) -> bool {
        self.runs.is_empty()
    }

    /// The length `ℓ(w)`.
    pub fn len(&self) -> usize {
        self.runs.iter().map(|r| r.exp as usize).sum()
    }

    pub fn letters(&self) -> Vec<&Variable> {
        self.runs
            .iter()
            .flat_map(|r| std::iter::repeat_n(&r.var, r.exp as usize))
            .collect()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut w = self.clone();
        for r in &other.runs {
            w.push(&r.var, r.exp);
        }
        w
    }

    /// Number of occurrences `κ_x(w)`.
    pub fn kappa(&self, x: &Variable) -> usize {
        self.runs
            .iter()
            .filter(|r| r.var == *x)
            .map(|r| r.exp as usize)
            .sum()
    }

    /// Variables in order of first occurrence.
    pub fn content(&self) -> Vec<Variable> {
        let mut seen = Vec::new();
        for r in &self.runs {
            if !seen.contains(&r.var) {
                seen.push(r.var.clone());
            }
        }
        seen
    }

    pub fn content_set(&self) -> BTreeSet<Variable> {
        self.runs.iter().map(|r| r.var.clone()).collect()
    }

    /// The set of run exponents `exp(w)`.
    pub fn exponent_set(&self) -> BTreeSet<u32> {
        self.runs.iter().map(|r| r.exp).collect()
    }

    pub fn max_exponent(&self) -> u32 {
        self.runs.iter().map(|r| r.exp).max().unwrap_or(0)
    }

    /// True iff every variable of the content occurs exactly `k` times.
    pub fn is_k_uniform(&self, k: usize) -> bool {
        !self.is_empty() && self.content().iter().all(|x| self.kappa(x) == k)
    }

    /// The common occurrence count when the word is uniform.
    pub fn uniform_degree(&self) -> Option<usize> {
        let k = self.kappa(&self.runs.first()?.var);
        self.is_k_uniform(k).then_some(k)
    }

    pub fn first_var(&self) -> Option<&Variable> {
        self.runs.first().map(|r| &r.var)
    }

    pub fn last_var(&self) -> Option<&Variable> {
        self.runs.last().map(|r| &r.var)
    }

    /// Exponent of the maximal prefix power of `x`; zero if `w` does not start with `x`.
    pub fn pre_run(&self, x: &Variable) -> u32 {
        match self.runs.first() {
            Some(r) if r.var == *x => r.exp,
            _ => 0,
        }
    }

    /// Exponent of the maximal suffix power of `x`; zero if `w` does not end with `x`.
    pub fn suf_run(&self, x: &Variable) -> u32 {
        match self.runs.last() {
            Some(r) if r.var == *x => r.exp,
            _ => 0,
        }
    }

    /// True iff `u` occurs contiguously in `self`. The empty word is a factor of everything.
    pub fn has_factor(&self, u: &Word) -> bool {
        let hay = self.letters();
        let needle = u.letters();
        needle.is_empty()
            || hay
                .windows(needle.len())
                .any(|win| win == needle.as_slice())
    }

    /// True iff `u` is a scattered subsequence of `self`.
    pub fn has_subword(&self, u: &Word) -> bool {
        let mut hay = self.letters().into_iter();
        u.letters().into_iter().all(|x| hay.any(|y| y == x))
    }

    /// Homomorphic image under `images`; every variable of the content needs an image.
    pub fn substitute(&self, images: &HashMap<Variable, Word>) -> Result<Word> {
        let mut out = Word::empty();
        for r in &self.runs {
            let img = images
                .get(&r.var)
                .ok_or_else(|| Error::UnboundVariable(r.var.to_string()))?;
            if img.is_empty() {
                return Err(Error::precondition(format!(
                    "image of `{}` must be non-empty",
                    r.var
                )));
            }
            for _ in 0..r.exp {
                out = out.concat(img);
            }
        }
        Ok(out)
    }
}

pub fn concat(u: &Word, v: &Word) -> Word {
    u.concat(v)
}

pub fn is_factor(u: &Word, w: &Word) -> bool {
    w.has_factor(u)
}

pub fn is_subword(u: &Word, v: &Word) -> bool {
    v.has_subword(u)
}

impl fmt::Display for Word {
    /// Prints `x^2y^2x`; the empty word prints as `e`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.runs.is_empty() {
            return f.write_str("e");
        }
        for r in &self.runs {
            f.write_str(r.var.name())?;
            if r.exp != 1 {
                write!(f, "^{}", r.exp)?;
            }
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;

    /// Grammar: `(letter digits? ('^' int)?)+`, whitespace ignored.
    /// A name made of a letter followed by digits (`y1`) is a single variable.
    fn from_str(s: &str) -> Result<Self> {
        let err = |reason: &str| Error::ParseWord {
            input: s.to_string(),
            reason: reason.to_string(),
        };
        let chars: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
        if chars.is_empty() {
            return Err(err("empty word"));
        }
        let mut w = Word::empty();
        let mut i = 0;
        while i < chars.len() {
            if !chars[i].is_ascii_alphabetic() {
                return Err(err(&format!("unexpected `{}`", chars[i])));
            }
            let start = i;
            i += 1;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let name: String = chars[start..i].iter().collect();
            let mut exp = 1u32;
            if i < chars.len() && chars[i] == '^' {
                i += 1;
                let ds = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let digits: String = chars[ds..i].iter().collect();
                exp = digits
                    .parse()
                    .ok()
                    .filter(|&e| e > 0)
                    .ok_or_else(|| err("exponent must be a positive integer"))?;
            }
            w.push(&Variable::new(&name)?, exp);
        }
        Ok(w)
    }
}

/// The class `𝒲_n[C, P]` with `P = {1, …, m}`: words of length `n` over `C`
/// with every run exponent at most `m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WordClassSpec {
    vars: Vec<Variable>,
    max_exp: u32,
    n: usize,
}

impl WordClassSpec {
    pub fn new(vars: Vec<Variable>, max_exp: u32, n: usize) -> Result<Self> {
        if vars.is_empty() {
            return Err(Error::InvalidClass("variable set must be non-empty".into()));
        }
        let distinct: HashSet<_> = vars.iter().collect();
        if distinct.len() != vars.len() {
            return Err(Error::InvalidClass("variables must be distinct".into()));
        }
        if max_exp == 0 {
            return Err(Error::InvalidClass(
                "exponent cap must be at least 1".into(),
            ));
        }
        if n < max_exp as usize {
            return Err(Error::InvalidClass(format!(
                "word length {n} is below the exponent cap {max_exp}"
            )));
        }
        Ok(WordClassSpec { vars, max_exp, n })
    }

    /// `C = {x, y}`, `P = {1, 2}`, the setting used for triangular matrices.
    pub fn xy(n: usize) -> Result<Self> {
        Self::new(vec![Variable::named("x"), Variable::named("y")], 2, n)
    }

    pub fn vars(&self) -> &[Variable] {
        &self.vars
    }

    pub fn max_exp(&self) -> u32 {
        self.max_exp
    }

    pub fn exponents(&self) -> BTreeSet<u32> {
        (1..=self.max_exp).collect()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub(crate) fn index_of(&self, v: &Variable) -> Option<usize> {
        self.vars.iter().position(|x| x == v)
    }

    /// Whether `w` only uses variables of `C` and exponents of `P`.
    pub fn admits(&self, w: &Word) -> bool {
        w.runs()
            .iter()
            .all(|r| r.exp <= self.max_exp && self.index_of(&r.var).is_some())
    }

    /// All members as index sequences into `vars`, in lexicographic order.
    pub(crate) fn enumerate_indices(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(self.n);
        self.extend(&mut cur, 0, &mut out);
        out
    }

    fn extend(&self, cur: &mut Vec<usize>, run: u32, out: &mut Vec<Vec<usize>>) {
        if cur.len() == self.n {
            out.push(cur.clone());
            return;
        }
        for c in 0..self.vars.len() {
            let next_run = if cur.last() == Some(&c) { run + 1 } else { 1 };
            if next_run > self.max_exp {
                continue;
            }
            cur.push(c);
            self.extend(cur, next_run, out);
            cur.pop();
        }
    }

    pub(crate) fn word_of_indices(&self, idx: &[usize]) -> Word {
        Word::from_letters(idx.iter().map(|&i| &self.vars[i]))
    }
}

/// Every member of the class, in lexicographic order of letters under the order of `C`.
pub fn enumerate_class(spec: &WordClassSpec) -> Vec<Word> {
    spec.enumerate_indices()
        .iter()
        .map(|idx| spec.word_of_indices(idx))
        .collect()
}

/// True iff `w` uses only `C` and `P` and contains every class member as a factor.
pub fn is_power_word(w: &Word, spec: &WordClassSpec) -> bool {
    if !spec.admits(w) {
        return false;
    }
    let letters = w.letters();
    let windows: HashSet<&[&Variable]> = letters.windows(spec.n).collect();
    enumerate_class(spec).iter().all(|u| {
        let l = u.letters();
        windows.contains(l.as_slice())
    })
}

/// A power word is faithful when its content is all of `C` and its exponent set all of `P`.
pub fn is_faithful(w: &Word, spec: &WordClassSpec) -> Result<bool> {
    if !is_power_word(w, spec) {
        return Err(Error::precondition(format!(
            "`{w}` is not a power word of the class"
        )));
    }
    let all_vars: BTreeSet<_> = spec.vars.iter().cloned().collect();
    Ok(w.content_set() == all_vars && w.exponent_set() == spec.exponents())
}

/// Concatenates the class members in enumeration order. Where two members
/// would fuse into a run longer than the cap, one separator letter is
/// placed between them.
pub fn construct_power_word(spec: &WordClassSpec) -> Result<Word> {
    if spec.vars.len() < 2 {
        return Err(Error::precondition(
            "power word construction needs at least two variables",
        ));
    }
    let mut out = Word::empty();
    for u in enumerate_class(spec) {
        let (Some(last), Some(first)) = (out.runs.last(), u.runs.first()) else {
            out = u;
            continue;
        };
        if last.var == first.var && last.exp + first.exp > spec.max_exp {
            let sep = spec
                .vars
                .iter()
                .find(|v| **v != first.var)
                .expect("two distinct variables");
            out.push(sep, 1);
        }
        out = out.concat(&u);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn x() -> Variable {
        Variable::named("x")
    }

    fn y() -> Variable {
        Variable::named("y")
    }

    #[test]
    fn parse_and_print() {
        assert_eq!(w("x^2y^2x"), w("xxyyx"));
        assert_eq!(w("x^2 y^2 x").to_string(), "x^2y^2x");
        assert_eq!(w("y1y2y2y1").to_string(), "y1y2^2y1");
        assert_eq!(w("x^3x").runs().len(), 1);
        assert_eq!(Word::empty().to_string(), "e");
        for bad in ["", "x^", "x^0", "^2", "1x", "x-y", "x^y"] {
            assert!(bad.parse::<Word>().is_err(), "{bad:?}");
        }
    }

    #[test]
    fn concat_examples() {
        assert_eq!(concat(&Word::empty(), &w("xy")), w("xy"));
        assert_eq!(concat(&w("x^2"), &w("xy")), w("x^3y"));
        let r = concat(&w("x^2y^2"), &w("yx"));
        assert_eq!(r, w("x^2y^3x"));
        assert_eq!(r.len(), 6);
    }

    #[test]
    fn occurrence_counts() {
        let v = w("x^2y^2x");
        assert_eq!(v.kappa(&x()), 3);
        assert_eq!(v.kappa(&y()), 2);
        assert_eq!(Word::empty().kappa(&x()), 0);
        assert_eq!(v.len(), 5);
    }

    #[test]
    fn exponent_sets_and_uniformity() {
        assert_eq!(w("x^2y^2x").exponent_set(), BTreeSet::from([1, 2]));
        assert_eq!(w("x^3").exponent_set(), BTreeSet::from([3]));
        assert_eq!(w("xyxy^2x^2y").exponent_set(), BTreeSet::from([1, 2]));

        assert!(w("xyxy^2x^2y").is_k_uniform(4));
        assert!((0..10).all(|k| !w("x^2y^2x").is_k_uniform(k)));
        assert!(w("xy").is_k_uniform(1));
        assert_eq!(w("yx^2y^2x").uniform_degree(), Some(3));
    }

    #[test]
    fn factors_and_subwords() {
        let v = w("x^2y^2x");
        assert!(is_factor(&w("xy"), &v));
        for u in ["yx", "x^2", "y^2"] {
            assert!(is_factor(&w(u), &v));
        }
        assert!(!is_factor(&w("xx"), &w("xyx")));

        assert!(is_subword(&w("xx"), &w("xyx")));
        assert!(is_subword(&v, &v));
        assert!(!is_subword(&w("yyy"), &w("xyxy")));
    }

    #[test]
    fn boundary_runs() {
        let v = w("x^2y^2x");
        assert_eq!(v.pre_run(&x()), 2);
        assert_eq!(v.suf_run(&x()), 1);
        assert_eq!(v.pre_run(&y()), 0);
        assert_eq!(v.suf_run(&y()), 0);
    }

    #[test]
    fn class_enumeration() {
        let two = enumerate_class(&WordClassSpec::xy(2).unwrap());
        assert_eq!(two, vec![w("x^2"), w("xy"), w("yx"), w("y^2")]);
        let three = enumerate_class(&WordClassSpec::xy(3).unwrap());
        assert_eq!(
            three,
            ["x^2y", "xyx", "xy^2", "yx^2", "yxy", "y^2x"]
                .map(w)
                .to_vec()
        );
        let single = WordClassSpec::new(vec![x()], 2, 2).unwrap();
        assert_eq!(enumerate_class(&single), vec![w("x^2")]);
    }

    #[test]
    fn class_spec_validation() {
        assert!(WordClassSpec::new(vec![], 2, 2).is_err());
        assert!(WordClassSpec::new(vec![x(), x()], 2, 2).is_err());
        assert!(WordClassSpec::new(vec![x(), y()], 0, 2).is_err());
        assert!(WordClassSpec::new(vec![x(), y()], 3, 2).is_err());
    }

    #[test]
    fn power_word_predicates() {
        let s2 = WordClassSpec::xy(2).unwrap();
        let s3 = WordClassSpec::xy(3).unwrap();
        assert!(is_power_word(&w("x^2y^2x"), &s2));
        assert!(is_power_word(&w("xyxy^2x^2y"), &s3));
        assert!(!is_power_word(&w("x^2y^2"), &s2));
        // exponent 3 is outside P even though every factor is present
        assert!(!is_power_word(&w("x^3y^2x"), &s2));

        assert!(is_faithful(&w("x^2y^2x"), &s2).unwrap());
        // still a power word, but its exponent set shrinks to {2}
        assert!(is_power_word(&w("x^2y^2x^2"), &s2));
        assert!(!is_faithful(&w("x^2y^2x^2"), &s2).unwrap());
        assert!(is_faithful(&w("yx^2y^2x"), &s2).unwrap());
        assert!(is_faithful(&w("x^3y^2xyx^2y^2x"), &s2).is_err());
        assert!(is_faithful(&w("xy"), &s2).is_err());

        let s_big = WordClassSpec::new(vec![x(), y()], 3, 3).unwrap();
        let pw = construct_power_word(&s_big).unwrap();
        assert!(is_faithful(&pw, &s_big).unwrap());
    }

    #[test]
    fn substitution() {
        let y1 = Variable::named("y1");
        let y2 = Variable::named("y2");
        let images = HashMap::from([
            (x(), Word::from_letters([&y1, &y2])),
            (y(), Word::from_letters([&y2, &y1])),
        ]);
        assert_eq!(w("xy").substitute(&images).unwrap(), w("y1y2^2y1"));

        let ident = HashMap::from([(x(), Word::letter(&x())), (y(), Word::letter(&y()))]);
        assert_eq!(w("x^2y^2x").substitute(&ident).unwrap(), w("x^2y^2x"));

        let checked = HashMap::from([(x(), w("XY"))]);
        assert_eq!(w("x^2").substitute(&checked).unwrap(), w("XYXY"));

        assert!(matches!(
            w("xz").substitute(&images),
            Err(Error::UnboundVariable(v)) if v == "z"
        ));
        let empty = HashMap::from([(x(), Word::empty())]);
        assert!(w("x").substitute(&empty).is_err());
    }

    #[test]
    fn naive_power_words() {
        for n in 2..=7 {
            let spec = WordClassSpec::xy(n).unwrap();
            let pw = construct_power_word(&spec).unwrap();
            assert!(is_power_word(&pw, &spec), "n = {n}");
            assert!(is_faithful(&pw, &spec).unwrap(), "n = {n}");
            assert!(pw.len() >= 5);
        }
        let xyz = WordClassSpec::new(vec![x(), y(), Variable::named("z")], 2, 3).unwrap();
        let pw = construct_power_word(&xyz).unwrap();
        assert!(is_faithful(&pw, &xyz).unwrap());
        assert!(construct_power_word(&WordClassSpec::new(vec![x()], 2, 2).unwrap()).is_err());
    }

    /// No word of length below five covers every member of the length-two class.
    #[test]
    fn no_short_two_power_word() {
        let spec = WordClassSpec::xy(2).unwrap();
        for len in 1..5usize {
            for bits in 0u32..(1 << len) {
                let cand = Word::from_letters((0..len).map(|i| {
                    if bits >> i & 1 == 0 {
                        &spec.vars[0]
                    } else {
                        &spec.vars[1]
                    }
                }));
                assert!(!is_power_word(&cand, &spec), "{cand}");
            }
        }
    }
}
