//! Semigroup identities: construction from power words, refinement to two
//! variables, evaluation on tropical matrices, and randomized/exhaustive
//! verification.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::oracle::oracle_product;
use crate::tropical::{MatrixClass, SamplerConfig, TropMatrix, TropValue};
use crate::words::{is_power_word, Variable, Word, WordClassSpec};

/// A formal equality `lhs = rhs` of two words.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Identity {
    pub lhs: Word,
    pub rhs: Word,
}

impl Identity {
    pub fn new(lhs: Word, rhs: Word) -> Result<Self> {
        if lhs.is_empty() || rhs.is_empty() {
            return Err(Error::precondition(
                "semigroup identities relate non-empty words",
            ));
        }
        Ok(Identity { lhs, rhs })
    }

    /// Both sides are the same word.
    pub fn is_trivial(&self) -> bool {
        self.lhs == self.rhs
    }

    pub fn content(&self) -> BTreeSet<Variable> {
        let mut c = self.lhs.content_set();
        c.extend(self.rhs.content_set());
        c
    }

    pub fn num_variables(&self) -> usize {
        self.content().len()
    }

    pub fn exponent_set(&self) -> BTreeSet<u32> {
        let mut e = self.lhs.exponent_set();
        e.extend(self.rhs.exponent_set());
        e
    }

    /// `ℓ(Π) = max(ℓ(u), ℓ(v))`.
    pub fn len(&self) -> usize {
        self.lhs.len().max(self.rhs.len())
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Every variable occurs equally often on both sides.
    pub fn is_balanced(&self) -> bool {
        self.content()
            .iter()
            .all(|x| self.lhs.kappa(x) == self.rhs.kappa(x))
    }

    /// Balanced, and both sides are `k`-uniform for one `k`.
    pub fn is_uniformly_balanced(&self) -> bool {
        self.is_balanced()
            && match self.lhs.uniform_degree() {
                Some(k) => self.rhs.is_k_uniform(k),
                None => false,
            }
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.lhs, self.rhs)
    }
}

impl FromStr for Identity {
    type Err = Error;

    /// `u = v` in the word grammar.
    fn from_str(s: &str) -> Result<Self> {
        let (l, r) = s
            .split_once('=')
            .ok_or_else(|| Error::precondition(format!("identity {s:?} lacks `=`")))?;
        Identity::new(l.parse()?, r.parse()?)
    }
}

#[derive(Serialize, Deserialize)]
struct IdentityJson {
    lhs: String,
    rhs: String,
}

impl Serialize for Identity {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        IdentityJson {
            lhs: self.lhs.to_string(),
            rhs: self.rhs.to_string(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Identity {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = IdentityJson::deserialize(d)?;
        let parse = |w: &str| w.parse::<Word>().map_err(serde::de::Error::custom);
        Identity::new(parse(&raw.lhs)?, parse(&raw.rhs)?).map_err(serde::de::Error::custom)
    }
}

impl Serialize for Variable {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for Variable {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let name = String::deserialize(d)?;
        Variable::new(&name).map_err(serde::de::Error::custom)
    }
}

/// How the power word is padded before it is used as prefix and suffix.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExtensionRule {
    /// Pad with a single letter.
    Letter,
    /// Pad with `z₁`/`z₂`; keeps a uniform power word uniform.
    Uniform,
}

/// The shape of a constructed identity.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IdentityForm {
    /// `w̃' z₁ w̃' = w̃' z₂ w̃'` with `z₁ = x₁⋯x_m`, `z₂ = x_m⋯x₁`.
    General,
    /// `w̃' x w̃' = w̃' y w̃'` over two variables.
    SingleLetter,
    /// The single-letter identity after `x ↦ AB`, `y ↦ BA`.
    Balanced,
}

impl FromStr for IdentityForm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "general" => Ok(IdentityForm::General),
            "single-letter" => Ok(IdentityForm::SingleLetter),
            "balanced" => Ok(IdentityForm::Balanced),
            other => Err(Error::precondition(format!(
                "unknown identity form `{other}`"
            ))),
        }
    }
}

/// `z₁ = x₁^{t} ⋯ x_m^{t}` and `z₂ = x_m^{t} ⋯ x₁^{t}` with `t = t_min = 1`.
fn middle_words(spec: &WordClassSpec) -> (Word, Word) {
    let z1 = Word::from_letters(spec.vars());
    let z2 = Word::from_letters(spec.vars().iter().rev());
    (z1, z2)
}

/// Pads a power word on both sides so that neither boundary run exceeds
/// `d = t_max − t_min`. The first matching guard wins on each side.
pub fn extend_for_identity(pw: &Word, spec: &WordClassSpec, rule: ExtensionRule) -> Result<Word> {
    if !is_power_word(pw, spec) {
        return Err(Error::precondition(format!(
            "`{pw}` is not a power word of the class"
        )));
    }
    let vars = spec.vars();
    let (first, last) = (&vars[0], &vars[vars.len() - 1]);
    let d = spec.max_exp() - 1;
    let (z1, z2) = middle_words(spec);
    let (pad_first, pad_last) = match rule {
        ExtensionRule::Letter => (
            (Word::letter(last), Word::letter(first)),
            (Word::letter(last), Word::letter(first)),
        ),
        ExtensionRule::Uniform => ((z1.clone(), z2.clone()), (z2, z1)),
    };
    let w1 = if pw.pre_run(first) > d {
        pad_first.0
    } else if pw.pre_run(last) > d {
        pad_first.1
    } else {
        Word::empty()
    };
    let w2 = if pw.suf_run(first) > d {
        pad_last.0
    } else if pw.suf_run(last) > d {
        pad_last.1
    } else {
        Word::empty()
    };
    Ok(w1.concat(pw).concat(&w2))
}

/// An identity of the form `base · mid · base`, kept with its parts for display.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstructedIdentity {
    pub identity: Identity,
    pub base: Word,
    pub lhs_mid: Word,
    pub rhs_mid: Word,
}

impl ConstructedIdentity {
    fn assemble(base: Word, lhs_mid: Word, rhs_mid: Word) -> Result<Self> {
        let identity = Identity::new(
            base.concat(&lhs_mid).concat(&base),
            base.concat(&rhs_mid).concat(&base),
        )?;
        Ok(ConstructedIdentity {
            identity,
            base,
            lhs_mid,
            rhs_mid,
        })
    }

    /// Both sides with the three parts separated by spaces, e.g. `yx^2y^2x x yx^2y^2x`.
    pub fn segmented(&self) -> (String, String) {
        (
            format!("{} {} {}", self.base, self.lhs_mid, self.base),
            format!("{} {} {}", self.base, self.rhs_mid, self.base),
        )
    }

    /// JSON with segmented sides; parses back to the same identity.
    pub fn to_json(&self) -> String {
        let (lhs, rhs) = self.segmented();
        serde_json::to_string(&IdentityJson { lhs, rhs }).expect("strings serialize")
    }
}

/// Builds the identity of `form` from an explicit power word.
pub fn construct_identity_from(
    pw: &Word,
    spec: &WordClassSpec,
    form: IdentityForm,
    rule: ExtensionRule,
) -> Result<ConstructedIdentity> {
    match form {
        IdentityForm::General => {
            if spec.vars().len() < 2 {
                return Err(Error::precondition(
                    "the general form needs at least two variables",
                ));
            }
            // with P = {1..m}: |P| > 1 and t_max >= 2 t_min both reduce to m >= 2
            if spec.max_exp() < 2 {
                return Err(Error::precondition(
                    "the general form needs |P| > 1 and t_max >= 2 t_min",
                ));
            }
            let base = extend_for_identity(pw, spec, rule)?;
            let (z1, z2) = middle_words(spec);
            ConstructedIdentity::assemble(base, z1, z2)
        }
        IdentityForm::SingleLetter | IdentityForm::Balanced => {
            if spec.vars().len() != 2 || spec.max_exp() != 2 {
                return Err(Error::precondition(
                    "the single-letter form needs two variables and P = {1, 2}",
                ));
            }
            let base = extend_for_identity(pw, spec, rule)?;
            let c = ConstructedIdentity::assemble(
                base,
                Word::letter(&spec.vars()[0]),
                Word::letter(&spec.vars()[1]),
            )?;
            if c.identity.exponent_set().iter().any(|&e| e > 2) {
                return Err(Error::precondition(format!(
                    "`{}` has a run longer than 2 after padding",
                    c.identity
                )));
            }
            if form == IdentityForm::SingleLetter {
                return Ok(c);
            }
            let images = checked_images(&spec.vars()[0], &spec.vars()[1], &checked_pair())?;
            ConstructedIdentity::assemble(
                c.base.substitute(&images)?,
                c.lhs_mid.substitute(&images)?,
                c.rhs_mid.substitute(&images)?,
            )
        }
    }
}

/// Builds the identity of `form` from the default power word of `spec`.
pub fn construct_identity(spec: &WordClassSpec, form: IdentityForm) -> Result<ConstructedIdentity> {
    let pw = crate::search::default_power_word(spec)?;
    construct_identity_from(&pw, spec, form, ExtensionRule::Letter)
}

/// The identity for `dim × dim` triangular matrices: built from
/// `(dim − 1)`-power words over `{x, y}` with `P = {1, 2}`.
pub fn identity_for_dimension(dim: usize, form: IdentityForm) -> Result<ConstructedIdentity> {
    if dim < 3 {
        return Err(Error::precondition(format!(
            "dimension {dim} is too small: words of length dim - 1 >= 2 are needed"
        )));
    }
    construct_identity(&WordClassSpec::xy(dim - 1)?, form)
}

fn checked_pair() -> (Variable, Variable) {
    (Variable::named("A"), Variable::named("B"))
}

fn checked_images(
    x: &Variable,
    y: &Variable,
    (a, b): &(Variable, Variable),
) -> Result<HashMap<Variable, Word>> {
    if a == b {
        return Err(Error::precondition("substitution targets must differ"));
    }
    Ok(HashMap::from([
        (x.clone(), Word::from_letters([a, b])),
        (y.clone(), Word::from_letters([b, a])),
    ]))
}

/// Substitutes `x ↦ AB`, `y ↦ BA` into a two-variable identity, where `x`
/// is the smaller variable name.
pub fn balance_substitute(id: &Identity) -> Result<Identity> {
    balance_substitute_into(id, &checked_pair())
}

pub fn balance_substitute_into(id: &Identity, targets: &(Variable, Variable)) -> Result<Identity> {
    let content: Vec<_> = id.content().into_iter().collect();
    let [x, y] = content.as_slice() else {
        return Err(Error::precondition(format!(
            "balancing needs a two-variable identity, got {} variables",
            content.len()
        )));
    };
    let images = checked_images(x, y, targets)?;
    Identity::new(id.lhs.substitute(&images)?, id.rhs.substitute(&images)?)
}

/// A split of an identity's content into two non-empty blocks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    pub first: BTreeSet<Variable>,
    pub second: BTreeSet<Variable>,
}

impl Partition {
    pub fn new(
        first: impl IntoIterator<Item = Variable>,
        second: impl IntoIterator<Item = Variable>,
    ) -> Self {
        Partition {
            first: first.into_iter().collect(),
            second: second.into_iter().collect(),
        }
    }

    /// The refinement variables `y1`, `y2`.
    pub fn targets() -> (Variable, Variable) {
        (Variable::named("y1"), Variable::named("y2"))
    }

    fn validate(&self, id: &Identity) -> Result<()> {
        if id.num_variables() < 2 {
            return Err(Error::precondition(
                "refinement needs at least two variables",
            ));
        }
        if self.first.is_empty() || self.second.is_empty() {
            return Err(Error::precondition(
                "both blocks of the partition must be non-empty",
            ));
        }
        if !self.first.is_disjoint(&self.second) {
            return Err(Error::precondition("partition blocks overlap"));
        }
        let union: BTreeSet<_> = self.first.union(&self.second).cloned().collect();
        if union != id.content() {
            return Err(Error::precondition(
                "partition does not cover exactly the identity's variables",
            ));
        }
        Ok(())
    }

    /// Maps first-block variables to `a[y1]·a[y2]` and second-block ones to `a[y2]·a[y1]`.
    pub fn induced_assignment(&self, refined: &Assignment) -> Result<Assignment> {
        let (y1, y2) = Self::targets();
        let get = |v: &Variable| {
            refined
                .get(v)
                .ok_or_else(|| Error::UnboundVariable(v.to_string()))
        };
        let p = get(&y1)?.mul(get(&y2)?)?;
        let q = get(&y2)?.mul(get(&y1)?)?;
        let mut out = Assignment::new();
        for v in &self.first {
            out.insert(v.clone(), p.clone());
        }
        for v in &self.second {
            out.insert(v.clone(), q.clone());
        }
        Ok(out)
    }
}

/// Substitutes `y1y2` for the first block and `y2y1` for the second, giving a
/// two-variable identity with exponents in `{1, 2}`. The result may be
/// trivial when a block holds variables the identity needs to tell apart.
pub fn refine_two_variable(id: &Identity, partition: &Partition) -> Result<Identity> {
    partition.validate(id)?;
    let (y1, y2) = Partition::targets();
    let mut images = HashMap::new();
    for v in &partition.first {
        images.insert(v.clone(), Word::from_letters([&y1, &y2]));
    }
    for v in &partition.second {
        images.insert(v.clone(), Word::from_letters([&y2, &y1]));
    }
    Identity::new(id.lhs.substitute(&images)?, id.rhs.substitute(&images)?)
}

/// Matrices bound to variables.
pub type Assignment = BTreeMap<Variable, TropMatrix>;

fn images_of<'a>(w: &Word, a: &'a Assignment) -> Result<Vec<&'a TropMatrix>> {
    w.letters()
        .into_iter()
        .map(|v| {
            a.get(v)
                .ok_or_else(|| Error::UnboundVariable(v.to_string()))
        })
        .collect()
}

/// Left-to-right tropical product of the images of the letters of `w`.
pub fn evaluate(w: &Word, a: &Assignment) -> Result<TropMatrix> {
    let images = images_of(w, a)?;
    let (first, rest) = images
        .split_first()
        .ok_or_else(|| Error::precondition("cannot evaluate the empty word"))?;
    rest.iter().try_fold((*first).clone(), |acc, m| acc.mul(m))
}

/// Exact equality of both sides under `a`.
pub fn check(id: &Identity, a: &Assignment) -> Result<bool> {
    Ok(evaluate(&id.lhs, a)? == evaluate(&id.rhs, a)?)
}

/// Evaluates `w` through the colored-digraph semantics instead of matrix products.
pub fn evaluate_by_paths(w: &Word, a: &Assignment) -> Result<TropMatrix> {
    let images: Vec<TropMatrix> = images_of(w, a)?.into_iter().cloned().collect();
    oracle_product(&images)
}

/// How matrices are bound to the identity's variables in each trial.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FuzzMode {
    /// Every variable gets its own sample.
    Independent,
    /// `x ↦ X`, `y ↦ Y` with `Y` sharing the diagonal of `X`.
    DiagPair,
    /// `x ↦ AB`, `y ↦ BA`.
    ProductPair,
}

impl FromStr for FuzzMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "independent" => Ok(FuzzMode::Independent),
            "diag-pair" => Ok(FuzzMode::DiagPair),
            "product-pair" => Ok(FuzzMode::ProductPair),
            other => Err(Error::precondition(format!("unknown fuzz mode `{other}`"))),
        }
    }
}

/// Outcome of a verification run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass { trials: u64 },
    Counterexample { trial: u64, assignment: Assignment },
}

impl Verdict {
    pub fn is_pass(&self) -> bool {
        matches!(self, Verdict::Pass { .. })
    }

    /// Reads back a line printed by `Display`.
    pub fn parse_line(line: &str) -> Result<Verdict> {
        let bad = || Error::precondition(format!("malformed verdict line {line:?}"));
        let line = line.trim_end();
        if let Some(rest) = line.strip_prefix("PASS trials=") {
            let trials = rest.parse().map_err(|_| bad())?;
            return Ok(Verdict::Pass { trials });
        }
        let rest = line.strip_prefix("FAIL trial=").ok_or_else(bad)?;
        let (k, payload) = rest.split_once(' ').ok_or_else(bad)?;
        Ok(Verdict::Counterexample {
            trial: k.parse().map_err(|_| bad())?,
            assignment: serde_json::from_str(payload)?,
        })
    }
}

impl fmt::Display for Verdict {
    /// `PASS trials=N` or `FAIL trial=k {"x": <matrix>, ...}`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Pass { trials } => write!(f, "PASS trials={trials}"),
            Verdict::Counterexample { trial, assignment } => write!(
                f,
                "FAIL trial={trial} {}",
                serde_json::to_string(assignment).map_err(|_| fmt::Error)?
            ),
        }
    }
}

fn pair_vars(id: &Identity, mode: FuzzMode) -> Result<Vec<Variable>> {
    let vars: Vec<_> = id.content().into_iter().collect();
    if mode != FuzzMode::Independent && vars.len() != 2 {
        return Err(Error::precondition(format!(
            "{mode:?} binds exactly two variables, the identity has {}",
            vars.len()
        )));
    }
    Ok(vars)
}

fn bind_pair(vars: &[Variable], first: TropMatrix, second: TropMatrix) -> Assignment {
    Assignment::from([(vars[0].clone(), first), (vars[1].clone(), second)])
}

fn with_diagonal_of(y: &mut TropMatrix, x: &TropMatrix) {
    for i in 0..x.n() {
        y.set(i, i, x.get(i, i).clone());
    }
}

/// Draws the assignment for one fuzz trial.
pub fn trial_assignment(
    vars: &[Variable],
    class: MatrixClass,
    n: usize,
    cfg: &SamplerConfig,
    mode: FuzzMode,
    trial: u64,
) -> Assignment {
    let mut rng = cfg.trial_rng(trial);
    match mode {
        FuzzMode::Independent => vars
            .iter()
            .map(|v| (v.clone(), cfg.sample_from(&mut rng, class, n)))
            .collect(),
        FuzzMode::DiagPair => {
            let x = cfg.sample_from(&mut rng, class, n);
            let mut y = cfg.sample_from(&mut rng, class, n);
            with_diagonal_of(&mut y, &x);
            bind_pair(vars, x, y)
        }
        FuzzMode::ProductPair => {
            let a = cfg.sample_from(&mut rng, class, n);
            let b = cfg.sample_from(&mut rng, class, n);
            bind_pair(
                vars,
                a.mul(&b).expect("same dimension"),
                b.mul(&a).expect("same dimension"),
            )
        }
    }
}

/// A counterexample only counts if the path semantics disagrees as well.
fn revalidate(id: &Identity, trial: u64, a: Assignment) -> Result<Verdict> {
    if evaluate_by_paths(&id.lhs, &a)? == evaluate_by_paths(&id.rhs, &a)? {
        return Err(Error::Revalidation(trial));
    }
    Ok(Verdict::Counterexample {
        trial,
        assignment: a,
    })
}

/// Randomized search for a counterexample. Trials run in parallel; the
/// reported counterexample is the one with the smallest trial index, so the
/// result does not depend on scheduling.
pub fn fuzz(
    id: &Identity,
    class: MatrixClass,
    n: usize,
    trials: u64,
    cfg: &SamplerConfig,
    mode: FuzzMode,
) -> Result<Verdict> {
    cfg.validate()?;
    if n == 0 {
        return Err(Error::precondition("matrix dimension must be positive"));
    }
    let vars = pair_vars(id, mode)?;
    let hit = (0..trials).into_par_iter().find_map_first(|t| {
        let a = trial_assignment(&vars, class, n, cfg, mode, t);
        match check(id, &a) {
            Ok(true) => None,
            Ok(false) => Some(Ok((t, a))),
            Err(e) => Some(Err(e)),
        }
    });
    match hit {
        None => Ok(Verdict::Pass { trials }),
        Some(Err(e)) => Err(e),
        Some(Ok((t, a))) => revalidate(id, t, a),
    }
}

/// The entry values of the exhaustive sweep: `{⊥, −1, 0, 1}`.
pub fn small_values() -> Vec<TropValue> {
    vec![
        TropValue::Bottom,
        TropValue::int(-1),
        TropValue::int(0),
        TropValue::int(1),
    ]
}

/// Upper bound on the number of assignments an exhaustive sweep will visit.
pub const EXHAUSTIVE_LIMIT: u64 = 1 << 24;

struct MatrixSpace {
    n: usize,
    positions: Vec<(usize, usize)>,
    values: Vec<TropValue>,
}

impl MatrixSpace {
    fn new(n: usize, class: MatrixClass, values: &[TropValue], skip_diagonal: bool) -> Self {
        let positions = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|&(i, j)| class.supports(i, j) && !(skip_diagonal && i == j))
            .collect();
        MatrixSpace {
            n,
            positions,
            values: values.to_vec(),
        }
    }

    fn size(&self) -> Option<u64> {
        (self.values.len() as u64).checked_pow(self.positions.len() as u32)
    }

    fn fill(&self, mut idx: u64, m: &mut TropMatrix) {
        let base = self.values.len() as u64;
        for &(i, j) in &self.positions {
            m.set(i, j, self.values[(idx % base) as usize].clone());
            idx /= base;
        }
    }

    fn matrix(&self, idx: u64) -> TropMatrix {
        let mut m = TropMatrix::zero(self.n);
        self.fill(idx, &mut m);
        m
    }
}

/// Every assignment with entries from `values` in the support of `class`,
/// bound according to `mode`. The trial index in a counterexample is the
/// position in this enumeration.
pub fn exhaustive_check(
    id: &Identity,
    class: MatrixClass,
    n: usize,
    values: &[TropValue],
    mode: FuzzMode,
) -> Result<Verdict> {
    let vars = pair_vars(id, mode)?;
    if values.is_empty() || n == 0 {
        return Err(Error::precondition(
            "exhaustive sweep needs values and a positive dimension",
        ));
    }
    let full = MatrixSpace::new(n, class, values, false);
    let off_diag = MatrixSpace::new(n, class, values, true);
    let too_big =
        || Error::precondition("exhaustive sweep is too large; reduce the dimension or value set");
    let per = full.size().ok_or_else(too_big)?;
    let total = match mode {
        FuzzMode::Independent => per.checked_pow(vars.len() as u32),
        FuzzMode::ProductPair => per.checked_pow(2),
        FuzzMode::DiagPair => off_diag.size().and_then(|s| s.checked_mul(per)),
    }
    .filter(|&t| t <= EXHAUSTIVE_LIMIT)
    .ok_or_else(too_big)?;

    let assignment = |mut t: u64| -> Assignment {
        match mode {
            FuzzMode::Independent => vars
                .iter()
                .map(|v| {
                    let m = full.matrix(t % per);
                    t /= per;
                    (v.clone(), m)
                })
                .collect(),
            FuzzMode::ProductPair => {
                let a = full.matrix(t % per);
                let b = full.matrix(t / per);
                bind_pair(
                    &vars,
                    a.mul(&b).expect("same dimension"),
                    b.mul(&a).expect("same dimension"),
                )
            }
            FuzzMode::DiagPair => {
                let x = full.matrix(t % per);
                let mut y = off_diag.matrix(t / per);
                with_diagonal_of(&mut y, &x);
                bind_pair(&vars, x, y)
            }
        }
    };
    let hit = (0..total).into_par_iter().find_map_first(|t| {
        let a = assignment(t);
        match check(id, &a) {
            Ok(true) => None,
            Ok(false) => Some(Ok((t, a))),
            Err(e) => Some(Err(e)),
        }
    });
    match hit {
        None => Ok(Verdict::Pass { trials: total }),
        Some(Err(e)) => Err(e),
        Some(Ok((t, a))) => revalidate(id, t, a),
    }
}
