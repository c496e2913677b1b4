//! Shortest power words and falsification sweeps over short identities.
//!
//! The exact search is a breadth-first search over cover states: the last
//! `n − 1` letters, the length of the trailing run, and the set of class
//! members seen so far. Two prefixes with the same state have the same
//! continuations, so the first prefix to reach a state (in lexicographic
//! order within a layer) is the only one kept.

use std::collections::{HashMap, HashSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::identities::{
    check, evaluate_by_paths, fuzz, small_values, Assignment, FuzzMode, Identity, Verdict,
};
use crate::tropical::{MatrixClass, SamplerConfig, TropMatrix};
use crate::words::{construct_power_word, is_power_word, Variable, Word, WordClassSpec};

/// Largest word length the exact search accepts.
pub const EXACT_MAX_N: usize = 5;

/// Largest side length `falsify_below` accepts.
pub const FALSIFY_MAX_LEN: usize = 9;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchMode {
    Exact,
    Greedy,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
struct CoverState {
    suffix: u32,
    suffix_len: u8,
    last: u8,
    run: u8,
    head: u8,
    covered: u64,
}

const NO_LETTER: u8 = u8::MAX;

// `head` packs the first letter with the state of its run: 0 while the word
// is one letter long, 1 once the first run is closed at length 1, 2 when it is
// doubled.
fn next_head(head: u8, c: u8) -> u8 {
    if head == NO_LETTER {
        return c;
    }
    let (first, status) = (head & 1, head >> 1);
    match status {
        0 if c == first => first | 2 << 1,
        0 => first | 1 << 1,
        _ => head,
    }
}

/// First and last letter after single-letter padding, for `C = {x, y}`, `P = {1, 2}`.
fn padded_ends(head: u8, last: u8, run: u8) -> (u8, u8) {
    let first = head & 1;
    let first = if head >> 1 == 2 { 1 - first } else { first };
    let last = if run == 2 { 1 - last } else { last };
    (first, last)
}

fn exact_supported(spec: &WordClassSpec) -> bool {
    spec.vars().len() == 2 && spec.max_exp() == 2 && spec.n() <= EXACT_MAX_N
}

/// A shortest power word of `spec`; among equally short ones the
/// lexicographically smallest under the order of `C`. With `distinct_ends`
/// only words whose padded form starts and ends with different letters count,
/// so that `w̃' x w̃'` and `w̃' y w̃'` keep every run at most 2.
fn exact_minimal(spec: &WordClassSpec, distinct_ends: bool) -> Word {
    let k = spec.vars().len() as u32;
    let n = spec.n();
    let class = spec.enumerate_indices();
    let all: u64 = if class.len() == 64 {
        u64::MAX
    } else {
        (1u64 << class.len()) - 1
    };
    let window_index: HashMap<u32, usize> = class
        .iter()
        .enumerate()
        .map(|(i, letters)| (letters.iter().fold(0, |acc, &c| acc * k + c as u32), i))
        .collect();
    let keep = (n - 1) as u8;
    let modulus = k.pow(keep as u32);

    // node 0 is the empty prefix; every other node is (parent, letter)
    let mut nodes: Vec<(u32, u8)> = vec![(0, NO_LETTER)];
    let start = CoverState {
        suffix: 0,
        suffix_len: 0,
        last: NO_LETTER,
        run: 0,
        head: NO_LETTER,
        covered: 0,
    };
    let mut seen = HashSet::from([start]);
    let mut layer = vec![(start, 0u32)];
    loop {
        let mut next = Vec::new();
        for &(st, node) in &layer {
            for c in 0..k as u8 {
                let run = if st.last == c { st.run + 1 } else { 1 };
                if u32::from(run) > spec.max_exp() {
                    continue;
                }
                let mut covered = st.covered;
                if st.suffix_len == keep {
                    if let Some(&i) = window_index.get(&(st.suffix * k + c as u32)) {
                        covered |= 1 << i;
                    }
                }
                let (suffix, suffix_len) = if keep == 0 {
                    (0, 0)
                } else {
                    (
                        (st.suffix * k + c as u32) % modulus,
                        (st.suffix_len + 1).min(keep),
                    )
                };
                let s = CoverState {
                    suffix,
                    suffix_len,
                    last: c,
                    run,
                    head: next_head(st.head, c),
                    covered,
                };
                if !seen.insert(s) {
                    continue;
                }
                nodes.push((node, c));
                let id = (nodes.len() - 1) as u32;
                let (first, last) = padded_ends(s.head, c, run);
                if covered == all && (!distinct_ends || first != last) {
                    return spell(spec, &nodes, id);
                }
                next.push((s, id));
            }
        }
        assert!(
            !next.is_empty(),
            "every class with two letters has a power word"
        );
        layer = next;
    }
}

fn spell(spec: &WordClassSpec, nodes: &[(u32, u8)], mut id: u32) -> Word {
    let mut letters = Vec::new();
    while id != 0 {
        let (parent, c) = nodes[id as usize];
        letters.push(&spec.vars()[c as usize]);
        id = parent;
    }
    letters.reverse();
    Word::from_letters(letters)
}

fn max_run(seq: &[usize]) -> usize {
    let mut best = 0;
    let mut cur = 0;
    for (i, c) in seq.iter().enumerate() {
        cur = if i > 0 && seq[i - 1] == *c {
            cur + 1
        } else {
            1
        };
        best = best.max(cur);
    }
    best
}

/// Greedy superstring: extend by a letter that completes a new member when
/// possible, otherwise append the uncovered member with the longest overlap.
fn greedy(spec: &WordClassSpec) -> Result<Word> {
    let k = spec.vars().len();
    if k < 2 {
        return Err(Error::precondition(
            "greedy search needs at least two variables",
        ));
    }
    let n = spec.n();
    let m = spec.max_exp() as usize;
    let class = spec.enumerate_indices();
    let members: HashSet<&[usize]> = class.iter().map(Vec::as_slice).collect();
    let mut seq = class[0].clone();
    let mut covered: HashSet<Vec<usize>> = HashSet::from([seq.clone()]);
    let record = |seq: &[usize], from: usize, covered: &mut HashSet<Vec<usize>>| {
        for start in from.saturating_sub(n - 1)..=seq.len().saturating_sub(n) {
            let win = &seq[start..start + n];
            if members.contains(win) {
                covered.insert(win.to_vec());
            }
        }
    };
    while covered.len() < class.len() {
        let tail_ok = |cand: &[usize]| max_run(&cand[cand.len().saturating_sub(n + m + 1)..]) <= m;
        let step = (0..k).find(|&c| {
            let mut cand = seq[seq.len() + 1 - n..].to_vec();
            cand.push(c);
            !covered.contains(&cand) && members.contains(cand.as_slice()) && {
                let mut t = seq.clone();
                t.push(c);
                tail_ok(&t)
            }
        });
        if let Some(c) = step {
            seq.push(c);
            record(&seq, seq.len() - 1, &mut covered);
            continue;
        }
        let mut best: Option<(usize, Vec<usize>)> = None;
        for u in class.iter().filter(|u| !covered.contains(*u)) {
            for ov in (0..n).rev() {
                if best.as_ref().is_some_and(|(b, _)| *b >= ov) {
                    break;
                }
                if seq.ends_with(&u[..ov]) {
                    let mut t = seq.clone();
                    t.extend_from_slice(&u[ov..]);
                    if tail_ok(&t) {
                        best = Some((ov, u[ov..].to_vec()));
                        break;
                    }
                }
            }
        }
        let from = seq.len();
        match best {
            Some((_, rest)) => seq.extend(rest),
            None => {
                let u = class
                    .iter()
                    .find(|u| !covered.contains(*u))
                    .expect("uncovered member");
                let sep = (0..k).find(|&c| c != u[0]).expect("two letters");
                seq.push(sep);
                seq.extend_from_slice(u);
            }
        }
        record(&seq, from, &mut covered);
    }
    Ok(spec.word_of_indices(&seq))
}

/// A shortest power word (exact) or a short one (greedy).
pub fn minimal_power_word(spec: &WordClassSpec, mode: SearchMode) -> Result<Word> {
    match mode {
        SearchMode::Exact if exact_supported(spec) => Ok(exact_minimal(spec, false)),
        SearchMode::Exact => Err(Error::precondition(format!(
            "exact search covers two variables, P = {{1, 2}} and n <= {EXACT_MAX_N}; use the greedy mode instead"
        ))),
        SearchMode::Greedy => greedy(spec),
    }
}

/// True iff `w` is a power word as short as the exact optimum.
pub fn verify_minimality_witness(w: &Word, spec: &WordClassSpec) -> Result<bool> {
    let best = minimal_power_word(spec, SearchMode::Exact)?;
    Ok(is_power_word(w, spec) && w.len() == best.len())
}

/// Appends at most two letters to a two-letter power word so that its padded
/// form starts and ends with different letters.
fn with_distinct_ends(w: Word, spec: &WordClassSpec) -> Word {
    let seq: Vec<usize> = w
        .letters()
        .into_iter()
        .map(|v| spec.index_of(v).expect("letter of the class"))
        .collect();
    let ends = |seq: &[usize]| {
        let pad = |c: usize, doubled: bool| if doubled { 1 - c } else { c };
        let first = pad(seq[0], seq.len() > 1 && seq[1] == seq[0]);
        let l = seq.len();
        let last = pad(seq[l - 1], l > 1 && seq[l - 2] == seq[l - 1]);
        first != last
    };
    let tails: [&[usize]; 7] = [&[], &[0], &[1], &[0, 0], &[0, 1], &[1, 0], &[1, 1]];
    for tail in tails {
        let mut t = seq.clone();
        t.extend_from_slice(tail);
        if max_run(&t) <= spec.max_exp() as usize && ends(&t) {
            return spec.word_of_indices(&t);
        }
    }
    unreachable!("two appended letters always separate the padded ends")
}

/// The power word identities are built from.
///
/// For `{x, y}`, `P = {1, 2}` and lengths 2 and 3 these are `x²y²x` and
/// `xyxy²x²y`, the minimal words the worked examples of the construction use.
/// Other two-letter classes with `n <= 5` take the shortest power word whose
/// padded form starts and ends with different letters; the remaining classes
/// use the greedy word, adjusted the same way when it has two letters.
pub fn default_power_word(spec: &WordClassSpec) -> Result<Word> {
    if spec.vars().len() == 2 && spec.max_exp() == 2 {
        let (x, y) = (&spec.vars()[0], &spec.vars()[1]);
        match spec.n() {
            2 => {
                return Ok(Word::from_runs([
                    (x.clone(), 2),
                    (y.clone(), 2),
                    (x.clone(), 1),
                ]))
            }
            3 => {
                return Ok(Word::from_runs([
                    (x.clone(), 1),
                    (y.clone(), 1),
                    (x.clone(), 1),
                    (y.clone(), 2),
                    (x.clone(), 2),
                    (y.clone(), 1),
                ]))
            }
            _ => {}
        }
    }
    if exact_supported(spec) {
        return Ok(exact_minimal(spec, true));
    }
    if spec.vars().len() < 2 {
        return construct_power_word(spec);
    }
    let w = greedy(spec)?;
    if spec.vars().len() == 2 && spec.max_exp() == 2 {
        return Ok(with_distinct_ends(w, spec));
    }
    Ok(w)
}

/// How a candidate was refuted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Refutation {
    /// Index into the exhaustive `{⊥, −1, 0, 1}` enumeration.
    Exhaustive(u64),
    /// Randomized trial index.
    Random(u64),
}

impl fmt::Display for Refutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Refutation::Exhaustive(i) => write!(f, "exhaustive={i}"),
            Refutation::Random(t) => write!(f, "random={t}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CandidateStatus {
    Falsified {
        how: Refutation,
        witness: Assignment,
    },
    /// No counterexample found; not a proof that the identity holds.
    Unresolved,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CandidateResult {
    pub identity: Identity,
    pub status: CandidateStatus,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FalsifyReport {
    pub length_bound: usize,
    pub dim: usize,
    pub results: Vec<CandidateResult>,
}

impl FalsifyReport {
    pub fn falsified(&self) -> impl Iterator<Item = &CandidateResult> {
        self.results
            .iter()
            .filter(|r| matches!(r.status, CandidateStatus::Falsified { .. }))
    }

    pub fn unresolved(&self) -> impl Iterator<Item = &CandidateResult> {
        self.results
            .iter()
            .filter(|r| r.status == CandidateStatus::Unresolved)
    }
}

/// A word over `{x, y}` packed as bits (1 = `y`), most significant letter first.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
struct Packed {
    len: u8,
    bits: u32,
}

impl Packed {
    fn ys(self) -> u32 {
        self.bits.count_ones()
    }

    fn swapped(self) -> Packed {
        Packed {
            len: self.len,
            bits: !self.bits & ((1 << self.len) - 1),
        }
    }

    fn slot(self) -> usize {
        (1usize << self.len) + self.bits as usize
    }

    fn word(self, x: &Variable, y: &Variable) -> Word {
        Word::from_letters(
            (0..self.len)
                .rev()
                .map(|i| if self.bits >> i & 1 == 1 { y } else { x }),
        )
    }
}

/// Nontrivial balanced two-variable candidates with sides of length
/// `2..=max_len`, one per orbit of swapping the sides and swapping `x ↔ y`.
fn balanced_candidates(max_len: usize) -> Vec<(Packed, Packed)> {
    let mut out = Vec::new();
    for len in 2..=max_len as u8 {
        let mut by_ys: HashMap<u32, Vec<Packed>> = HashMap::new();
        for bits in 0..(1u32 << len) {
            let p = Packed { len, bits };
            if p.ys() != 0 && p.ys() != len as u32 {
                by_ys.entry(p.ys()).or_default().push(p);
            }
        }
        let mut keys: Vec<_> = by_ys.keys().copied().collect();
        keys.sort_unstable();
        for ys in keys {
            let group = &by_ys[&ys];
            for (i, &u) in group.iter().enumerate() {
                for &v in &group[i + 1..] {
                    let (su, sv) = (u.swapped(), v.swapped());
                    let mirror = if su < sv { (su, sv) } else { (sv, su) };
                    if (u, v) <= mirror {
                        out.push((u, v));
                    }
                }
            }
        }
    }
    out
}

/// Products of every word of length `1..=max_len` under `x ↦ a`, `y ↦ b`, indexed by `Packed::slot`.
fn all_products(a: &TropMatrix, b: &TropMatrix, max_len: usize) -> Vec<Option<TropMatrix>> {
    let mut table: Vec<Option<TropMatrix>> = vec![None; 1 << (max_len + 1)];
    table[Packed { len: 1, bits: 0 }.slot()] = Some(a.clone());
    table[Packed { len: 1, bits: 1 }.slot()] = Some(b.clone());
    for len in 2..=max_len as u8 {
        for bits in 0..(1u32 << len) {
            let parent = Packed {
                len: len - 1,
                bits: bits >> 1,
            };
            let m = if bits & 1 == 1 { b } else { a };
            let prod = table[parent.slot()]
                .as_ref()
                .expect("shorter words first")
                .mul(m)
                .expect("same dimension");
            table[Packed { len, bits }.slot()] = Some(prod);
        }
    }
    table
}

/// Searches every nontrivial balanced two-variable identity with sides of
/// length at most `length_bound` for a counterexample over upper triangular
/// `dim × dim` matrices: first all `{⊥, −1, 0, 1}` assignments, then
/// `trials_per_candidate` random ones. Survivors are reported as unresolved.
pub fn falsify_below(
    length_bound: usize,
    dim: usize,
    trials_per_candidate: u64,
    cfg: &SamplerConfig,
) -> Result<FalsifyReport> {
    if dim != 2 {
        return Err(Error::precondition(
            "the falsification sweep runs over 2x2 matrices",
        ));
    }
    if !(2..=FALSIFY_MAX_LEN).contains(&length_bound) {
        return Err(Error::precondition(format!(
            "length bound must lie in 2..={FALSIFY_MAX_LEN}"
        )));
    }
    cfg.validate()?;
    let (x, y) = (Variable::named("x"), Variable::named("y"));
    let candidates = balanced_candidates(length_bound);
    let mut status: Vec<Option<CandidateStatus>> = vec![None; candidates.len()];
    let mut open: Vec<usize> = (0..candidates.len()).collect();

    let values = small_values();
    let support = [(0usize, 0usize), (0, 1), (1, 1)];
    let per = (values.len() as u64).pow(support.len() as u32);
    let matrix = |mut idx: u64| {
        let mut m = TropMatrix::zero(dim);
        for &(i, j) in &support {
            m.set(i, j, values[(idx % values.len() as u64) as usize].clone());
            idx /= values.len() as u64;
        }
        m
    };
    for t in 0..per * per {
        if open.is_empty() {
            break;
        }
        let (a, b) = (matrix(t % per), matrix(t / per));
        let table = all_products(&a, &b, length_bound);
        open.retain(|&ci| {
            let (u, v) = candidates[ci];
            if table[u.slot()] == table[v.slot()] {
                return true;
            }
            status[ci] = Some(CandidateStatus::Falsified {
                how: Refutation::Exhaustive(t),
                witness: Assignment::from([(x.clone(), a.clone()), (y.clone(), b.clone())]),
            });
            false
        });
    }
    for &ci in &open {
        let (u, v) = candidates[ci];
        let id = Identity::new(u.word(&x, &y), v.word(&x, &y))?;
        status[ci] = Some(
            match fuzz(
                &id,
                MatrixClass::UpperTriangular,
                dim,
                trials_per_candidate,
                cfg,
                FuzzMode::Independent,
            )? {
                Verdict::Pass { .. } => CandidateStatus::Unresolved,
                Verdict::Counterexample { trial, assignment } => CandidateStatus::Falsified {
                    how: Refutation::Random(trial),
                    witness: assignment,
                },
            },
        );
    }

    let mut results = Vec::with_capacity(candidates.len());
    for (&(u, v), st) in candidates.iter().zip(status) {
        let identity = Identity::new(u.word(&x, &y), v.word(&x, &y))?;
        let status = st.expect("every candidate decided");
        if let CandidateStatus::Falsified { witness, how } = &status {
            let by_paths = evaluate_by_paths(&identity.lhs, witness)?
                != evaluate_by_paths(&identity.rhs, witness)?;
            if check(&identity, witness)? || !by_paths {
                let t = match how {
                    Refutation::Exhaustive(t) | Refutation::Random(t) => *t,
                };
                return Err(Error::Revalidation(t));
            }
        }
        results.push(CandidateResult { identity, status });
    }
    Ok(FalsifyReport {
        length_bound,
        dim,
        results,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn exact_optima_for_small_lengths() {
        let s2 = WordClassSpec::xy(2).unwrap();
        let s3 = WordClassSpec::xy(3).unwrap();
        let m2 = minimal_power_word(&s2, SearchMode::Exact).unwrap();
        assert_eq!(m2, w("x^2y^2x"));
        let m3 = minimal_power_word(&s3, SearchMode::Exact).unwrap();
        assert_eq!(m3.len(), 8);
        assert!(is_power_word(&m3, &s3));
        assert_eq!(m3, w("x^2yxy^2x^2"));
    }

    #[test]
    fn exact_optimum_for_four_and_five() {
        let s4 = WordClassSpec::xy(4).unwrap();
        let s5 = WordClassSpec::xy(5).unwrap();
        assert_eq!(
            minimal_power_word(&s4, SearchMode::Exact).unwrap().len(),
            14
        );
        assert_eq!(
            minimal_power_word(&s5, SearchMode::Exact).unwrap().len(),
            22
        );
    }

    fn words_up_to(len: usize) -> impl Iterator<Item = Word> {
        let (x, y) = (Variable::named("x"), Variable::named("y"));
        (1..=len).flat_map(move |l| {
            let (x, y) = (x.clone(), y.clone());
            (0..1u32 << l).map(move |bits| {
                Word::from_letters((0..l).map(|i| if bits >> i & 1 == 1 { &y } else { &x }))
            })
        })
    }

    #[test]
    fn nothing_shorter_than_the_optimum() {
        for (n, opt) in [(2, 5), (3, 8)] {
            let spec = WordClassSpec::xy(n).unwrap();
            assert!(words_up_to(opt - 1).all(|w| !is_power_word(&w, &spec)));
        }
    }

    #[test]
    fn default_words_give_single_letter_identities_without_cubes() {
        use crate::identities::{identity_for_dimension, IdentityForm};
        let lens: Vec<usize> = (3..=9)
            .map(|dim| {
                let spec = WordClassSpec::xy(dim - 1).unwrap();
                let pw = default_power_word(&spec).unwrap();
                assert!(is_power_word(&pw, &spec));
                let c = identity_for_dimension(dim, IdentityForm::SingleLetter).unwrap();
                assert!(
                    c.identity.exponent_set().iter().all(|&e| e <= 2),
                    "dim {dim}"
                );
                pw.len()
            })
            .collect();
        assert_eq!(&lens[..4], &[5, 8, 16, 24]);
    }

    #[test]
    fn exact_mode_limits() {
        let s6 = WordClassSpec::xy(6).unwrap();
        assert!(minimal_power_word(&s6, SearchMode::Exact).is_err());
        let g = minimal_power_word(&s6, SearchMode::Greedy).unwrap();
        assert!(is_power_word(&g, &s6));
        let xyz = WordClassSpec::new(
            vec![
                Variable::named("x"),
                Variable::named("y"),
                Variable::named("z"),
            ],
            2,
            2,
        )
        .unwrap();
        assert!(minimal_power_word(&xyz, SearchMode::Exact).is_err());
        assert!(is_power_word(
            &minimal_power_word(&xyz, SearchMode::Greedy).unwrap(),
            &xyz
        ));
    }

    #[test]
    fn greedy_is_never_shorter_than_exact() {
        for n in 2..=EXACT_MAX_N {
            let spec = WordClassSpec::xy(n).unwrap();
            let exact = minimal_power_word(&spec, SearchMode::Exact).unwrap();
            let greedy = minimal_power_word(&spec, SearchMode::Greedy).unwrap();
            assert!(is_power_word(&greedy, &spec));
            assert!(exact.len() <= greedy.len(), "n = {n}");
        }
    }

    #[test]
    fn minimality_witnesses() {
        let s2 = WordClassSpec::xy(2).unwrap();
        let s3 = WordClassSpec::xy(3).unwrap();
        assert!(verify_minimality_witness(&w("x^2y^2x"), &s2).unwrap());
        assert!(verify_minimality_witness(&w("xyxy^2x^2y"), &s3).unwrap());
        assert!(!verify_minimality_witness(&w("x^2y^2xy"), &s2).unwrap());
    }

    #[test]
    fn candidate_orbits() {
        let c = balanced_candidates(2);
        // xy = yx is the only length-2 candidate
        assert_eq!(c.len(), 1);
        let c = balanced_candidates(3);
        // {xxy, xyx, yxx} gives three pairs; its mirror {yyx, yxy, xyy} adds none
        assert_eq!(c.len(), 4);
    }

    #[test]
    fn short_sweep_falsifies_everything() {
        let report = falsify_below(4, 2, 50, &SamplerConfig::with_seed(3)).unwrap();
        assert!(report.unresolved().next().is_none());
        let xy: Identity = "xy = yx".parse().unwrap();
        assert!(report.falsified().any(|r| r.identity == xy));
        let x2y: Identity = "x^2y = xyx".parse().unwrap();
        assert!(report.falsified().any(|r| r.identity == x2y));
        assert!(falsify_below(10, 2, 1, &SamplerConfig::default()).is_err());
        assert!(falsify_below(4, 3, 1, &SamplerConfig::default()).is_err());
    }
}
