//! One-variable words over `G ∪ {x, x^-1}` and multiplicative functions.
//!
//! Both are kept unreduced: no free cancellation happens, and lengths count
//! literal letters.
//!
//! Text grammar, whitespace separated:
//!
//! * words: `x`, `x^-1`, or a constant name optionally followed by `^-1`;
//! * multiplicative functions: `#k` or `#k^-1` with `k >= 1`.
//!
//! The empty string is the empty word (value: the identity).

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, ParseError, Result};
use crate::groups::{Element, Group};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn exponent(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Letter {
    Const(Element),
    Var(Sign),
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Word {
    pub letters: Vec<Letter>,
}

impl Word {
    pub fn new(letters: Vec<Letter>) -> Self {
        Word { letters }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// `x c^-1`, whose only solution is `c`.
    pub fn singleton(group: &Group, c: &Element) -> Self {
        Word::new(vec![Letter::Var(Sign::Plus), Letter::Const(group.inv(c))])
    }

    /// Left-to-right product of the letter values at `x`.
    pub fn evaluate(&self, group: &Group, x: &Element) -> Result<Element> {
        group.validate(x)?;
        let x_inv = group.inv(x);
        let mut acc = group.identity();
        for letter in &self.letters {
            let v = match letter {
                Letter::Const(c) => {
                    group.validate(c)?;
                    c
                }
                Letter::Var(Sign::Plus) => x,
                Letter::Var(Sign::Minus) => &x_inv,
            };
            acc = group.op(&acc, v);
        }
        Ok(acc)
    }

    pub fn display(&self, group: &Group) -> String {
        let tokens: Vec<String> = self
            .letters
            .iter()
            .map(|l| match l {
                Letter::Var(Sign::Plus) => "x".to_string(),
                Letter::Var(Sign::Minus) => "x^-1".to_string(),
                Letter::Const(c) => group.format_element(c),
            })
            .collect();
        tokens.join(" ")
    }
}

/// Resolves constant names in word text: named scenario elements first, then
/// the group's own element literals.
#[derive(Debug, Clone)]
pub struct WordContext<'a> {
    pub group: &'a Group,
    pub named: HashMap<String, Element>,
}

impl<'a> WordContext<'a> {
    pub fn new(group: &'a Group) -> Self {
        WordContext {
            group,
            named: HashMap::new(),
        }
    }

    pub fn with_names(group: &'a Group, named: HashMap<String, Element>) -> Self {
        WordContext { group, named }
    }

    fn resolve(&self, name: &str) -> Option<Element> {
        self.named
            .get(name)
            .cloned()
            .or_else(|| self.group.parse_element(name).ok())
    }
}

/// Splits `text` into whitespace-separated tokens with their byte offsets.
fn tokens(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.split_whitespace()
        .map(move |tok| (tok.as_ptr() as usize - text.as_ptr() as usize, tok))
}

/// Splits an optional `^-1` exponent off a token.
fn split_exponent(offset: usize, tok: &str) -> Result<(&str, Sign), ParseError> {
    match tok.find('^') {
        None => Ok((tok, Sign::Plus)),
        Some(at) => {
            let base = &tok[..at];
            if base.is_empty() {
                return Err(ParseError::new(offset, "missing base before `^`"));
            }
            match &tok[at + 1..] {
                "-1" => Ok((base, Sign::Minus)),
                "1" | "+1" => Ok((base, Sign::Plus)),
                "" => Err(ParseError::new(offset + at, "missing exponent after `^`")),
                _ => Err(ParseError::new(offset + at + 1, "exponent must be -1 or 1")),
            }
        }
    }
}

pub fn parse_word(text: &str, ctx: &WordContext<'_>) -> Result<Word> {
    let mut letters = Vec::new();
    for (offset, tok) in tokens(text) {
        let (base, sign) = split_exponent(offset, tok)?;
        if base == "x" {
            letters.push(Letter::Var(sign));
            continue;
        }
        let c = ctx.resolve(base).ok_or_else(|| Error::UnknownElement(base.to_string()))?;
        letters.push(Letter::Const(match sign {
            Sign::Plus => c,
            Sign::Minus => ctx.group.inv(&c),
        }));
    }
    Ok(Word::new(letters))
}

/// A word on the alphabet `{(1, ±1), ..., (m, ±1)}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MultiplicativeFunction {
    arity: usize,
    letters: Vec<(usize, Sign)>,
}

impl MultiplicativeFunction {
    pub fn new(arity: usize, letters: Vec<(usize, Sign)>) -> Result<Self> {
        if arity == 0 {
            return Err(Error::Arity { expected: 1, got: 0 });
        }
        if let Some(&(index, _)) = letters.iter().find(|(i, _)| *i == 0 || *i > arity) {
            return Err(Error::IndexOutOfRange { index, arity });
        }
        Ok(MultiplicativeFunction { arity, letters })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[(usize, Sign)] {
        &self.letters
    }

    /// Parses `#k` / `#k^-1` tokens for a function of `arity` arguments.
    pub fn parse(text: &str, arity: usize) -> Result<Self> {
        let mut letters = Vec::new();
        for (offset, tok) in tokens(text) {
            let (base, sign) = split_exponent(offset, tok)?;
            let digits = base
                .strip_prefix('#')
                .ok_or_else(|| ParseError::new(offset, "expected `#index`"))?;
            let index: usize = digits
                .parse()
                .map_err(|_| ParseError::new(offset + 1, "argument index must be a positive integer"))?;
            letters.push((index, sign));
        }
        Self::new(arity, letters)
    }

    /// `prod x_{j_i}^{e_i}`, folded left to right.
    pub fn evaluate(&self, group: &Group, args: &[Element]) -> Result<Element> {
        if args.len() != self.arity {
            return Err(Error::Arity {
                expected: self.arity,
                got: args.len(),
            });
        }
        for a in args {
            group.validate(a)?;
        }
        Ok(self.evaluate_unchecked(group, args))
    }

    pub(crate) fn evaluate_unchecked(&self, group: &Group, args: &[Element]) -> Element {
        let mut acc = group.identity();
        for &(i, sign) in &self.letters {
            let v = &args[i - 1];
            acc = match sign {
                Sign::Plus => group.op(&acc, v),
                Sign::Minus => group.op(&acc, &group.inv(v)),
            };
        }
        acc
    }

    /// Substitutes constants for the argument slots; `None` slots become the
    /// variable `x`.
    pub fn substitute(&self, group: &Group, args: &[Option<Element>]) -> Result<Word> {
        if args.len() != self.arity {
            return Err(Error::Arity {
                expected: self.arity,
                got: args.len(),
            });
        }
        let letters = self
            .letters
            .iter()
            .map(|&(i, sign)| match (&args[i - 1], sign) {
                (None, s) => Letter::Var(s),
                (Some(c), Sign::Plus) => Letter::Const(c.clone()),
                (Some(c), Sign::Minus) => Letter::Const(group.inv(c)),
            })
            .collect();
        Ok(Word::new(letters))
    }
}

impl fmt::Display for MultiplicativeFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (n, &(i, sign)) in self.letters.iter().enumerate() {
            if n > 0 {
                f.write_str(" ")?;
            }
            match sign {
                Sign::Plus => write!(f, "#{i}")?,
                Sign::Minus => write!(f, "#{i}^-1")?,
            }
        }
        Ok(())
    }
}

/// Parses with the arity taken as the largest index used (at least 1).
impl FromStr for MultiplicativeFunction {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let probe = MultiplicativeFunction::parse(text, usize::MAX)?;
        let arity = probe.letters.iter().map(|&(i, _)| i).max().unwrap_or(1);
        MultiplicativeFunction::new(arity, probe.letters)
    }
}

/// All multiplicative functions of `arity` arguments and length at most
/// `max_len`, shortest first, then lexicographic with the letter order
/// `(1,+1) < (1,-1) < (2,+1) < ...`.
pub fn enumerate_mfs(arity: usize, max_len: usize) -> MfEnumerator {
    assert!(arity >= 1, "multiplicative functions need at least one argument");
    MfEnumerator {
        arity,
        max_len,
        digits: Some(Vec::new()),
    }
}

/// Number of functions produced by [`enumerate_mfs`].
pub fn mf_count(arity: usize, max_len: usize) -> u128 {
    let base = 2 * arity as u128;
    (0..=max_len as u32).map(|l| base.pow(l)).sum()
}

#[derive(Debug, Clone)]
pub struct MfEnumerator {
    arity: usize,
    max_len: usize,
    digits: Option<Vec<usize>>,
}

impl Iterator for MfEnumerator {
    type Item = MultiplicativeFunction;

    fn next(&mut self) -> Option<MultiplicativeFunction> {
        let digits = self.digits.as_mut()?;
        let letters = digits
            .iter()
            .map(|&d| (d / 2 + 1, if d % 2 == 0 { Sign::Plus } else { Sign::Minus }))
            .collect();
        let out = MultiplicativeFunction {
            arity: self.arity,
            letters,
        };
        // odometer step; on overflow move to the next length
        let base = 2 * self.arity;
        let mut pos = digits.len();
        loop {
            if pos == 0 {
                let next_len = digits.len() + 1;
                if next_len > self.max_len {
                    self.digits = None;
                } else {
                    *digits = vec![0; next_len];
                }
                break;
            }
            pos -= 1;
            digits[pos] += 1;
            if digits[pos] < base {
                break;
            }
            digits[pos] = 0;
        }
        Some(out)
    }
}
