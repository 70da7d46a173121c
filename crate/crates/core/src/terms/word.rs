use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

/// A variable, compared and ordered by name.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(Arc<str>);

impl Var {
    pub fn new(name: &str) -> Self {
        Var(Arc::from(name))
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Var {
    fn from(name: &str) -> Self {
        Var::new(name)
    }
}

fn shortlex<T: Ord>(a: &[T], b: &[T]) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

/// Element of the free monoid: a finite sequence of variables. The empty word is `e`.
///
/// Words are ordered shortlex (length first, then lexicographically by variable name),
/// which is the index order used everywhere a set of words is enumerated.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct MonWord(Vec<Var>);

impl MonWord {
    pub fn new(letters: Vec<Var>) -> Self {
        MonWord(letters)
    }

    pub fn identity() -> Self {
        MonWord(Vec::new())
    }

    /// Builds a word from single-character variable names, e.g. `"xyx"`.
    pub fn from_chars(s: &str) -> Self {
        MonWord(s.chars().map(|c| Var::new(&c.to_string())).collect())
    }

    pub fn letters(&self) -> &[Var] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &MonWord) -> MonWord {
        let mut letters = self.0.clone();
        letters.extend(other.0.iter().cloned());
        MonWord(letters)
    }

    pub fn with(&self, x: &Var) -> MonWord {
        let mut letters = self.0.clone();
        letters.push(x.clone());
        MonWord(letters)
    }

    /// The initial segment of the given length.
    pub fn prefix(&self, len: usize) -> MonWord {
        MonWord(self.0[..len.min(self.0.len())].to_vec())
    }

    pub fn last(&self) -> Option<&Var> {
        self.0.last()
    }

    pub fn to_group_word(&self) -> GrpWord {
        GrpWord(self.0.iter().cloned().map(Letter::pos).collect())
    }

    pub fn vars(&self) -> impl Iterator<Item = &Var> {
        self.0.iter()
    }
}

impl Ord for MonWord {
    fn cmp(&self, other: &Self) -> Ordering {
        shortlex(&self.0, &other.0)
    }
}

impl PartialOrd for MonWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Compact form: `e` for the identity, plain juxtaposition when every variable name is a
/// single character (`xyx`), otherwise `*`-separated.
impl fmt::Display for MonWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("e");
        }
        let compact = self.0.iter().all(|v| v.name().chars().count() == 1);
        let sep = if compact { "" } else { "*" };
        let parts: Vec<&str> = self.0.iter().map(|v| v.name()).collect();
        f.write_str(&parts.join(sep))
    }
}

impl fmt::Debug for MonWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// A variable or its formal inverse.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub var: Var,
    pub inverted: bool,
}

impl Letter {
    pub fn pos(var: Var) -> Self {
        Letter {
            var,
            inverted: false,
        }
    }

    pub fn neg(var: Var) -> Self {
        Letter { var, inverted: true }
    }

    pub fn inverse(&self) -> Self {
        Letter {
            var: self.var.clone(),
            inverted: !self.inverted,
        }
    }

    fn cancels(&self, other: &Letter) -> bool {
        self.var == other.var && self.inverted != other.inverted
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.inverted {
            write!(f, "{}^-1", self.var)
        } else {
            write!(f, "{}", self.var)
        }
    }
}

/// Freely reduced element of the free group. The constructor is private; every value
/// produced by this module is reduced.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct GrpWord(Vec<Letter>);

/// Free reduction of a sequence of signed letters.
pub fn reduce_group_word<I: IntoIterator<Item = Letter>>(letters: I) -> GrpWord {
    let mut stack: Vec<Letter> = Vec::new();
    for l in letters {
        if stack.last().is_some_and(|top| top.cancels(&l)) {
            stack.pop();
        } else {
            stack.push(l);
        }
    }
    GrpWord(stack)
}

impl GrpWord {
    pub fn identity() -> Self {
        GrpWord(Vec::new())
    }

    pub fn letter(l: Letter) -> Self {
        GrpWord(vec![l])
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &GrpWord) -> GrpWord {
        reduce_group_word(self.0.iter().chain(other.0.iter()).cloned())
    }

    pub fn inverse(&self) -> GrpWord {
        GrpWord(self.0.iter().rev().map(Letter::inverse).collect())
    }

    pub fn inverse_count(&self) -> usize {
        self.0.iter().filter(|l| l.inverted).count()
    }

    pub fn is_inverse_free(&self) -> bool {
        self.inverse_count() == 0
    }

    /// Position of the leftmost inverted letter.
    pub fn first_inverse(&self) -> Option<usize> {
        self.0.iter().position(|l| l.inverted)
    }

    /// Splits the word around position `i` into `(prefix, letter, suffix)`.
    pub fn split_at_letter(&self, i: usize) -> (GrpWord, Letter, GrpWord) {
        (
            GrpWord(self.0[..i].to_vec()),
            self.0[i].clone(),
            GrpWord(self.0[i + 1..].to_vec()),
        )
    }

    pub fn to_mon_word(&self) -> Option<MonWord> {
        if !self.is_inverse_free() {
            return None;
        }
        Some(MonWord(self.0.iter().map(|l| l.var.clone()).collect()))
    }

    pub fn vars(&self) -> impl Iterator<Item = &Var> {
        self.0.iter().map(|l| &l.var)
    }
}

impl Ord for GrpWord {
    fn cmp(&self, other: &Self) -> Ordering {
        shortlex(&self.0, &other.0)
    }
}

impl PartialOrd for GrpWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for GrpWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("e");
        }
        let parts: Vec<String> = self.0.iter().map(|l| format!("{l:?}")).collect();
        f.write_str(&parts.join("*"))
    }
}

impl fmt::Debug for GrpWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Prefix reserved for machine-generated variables.
pub const FRESH_PREFIX: &str = "_y";

/// Supplies variables named `_y0, _y1, ...` that avoid a forbidden set and each other.
#[derive(Clone, Debug, Default)]
pub struct FreshVarSupply {
    forbidden: BTreeSet<Var>,
    counter: usize,
}

impl FreshVarSupply {
    pub fn new<I: IntoIterator<Item = Var>>(forbidden: I) -> Self {
        FreshVarSupply {
            forbidden: forbidden.into_iter().collect(),
            counter: 0,
        }
    }

    pub fn forbid(&mut self, v: Var) {
        self.forbidden.insert(v);
    }

    pub fn next_var(&mut self) -> Var {
        loop {
            let v = Var::new(&format!("{FRESH_PREFIX}{}", self.counter));
            self.counter += 1;
            if self.forbidden.insert(v.clone()) {
                return v;
            }
        }
    }

    pub fn fresh_variables(&mut self, n: usize) -> Vec<Var> {
        (0..n).map(|_| self.next_var()).collect()
    }
}
