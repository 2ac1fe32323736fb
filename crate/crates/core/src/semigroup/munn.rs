//! Free inverse semigroup on `{a, b}` via birooted word trees: an element is
//! a finite prefix-closed set of reduced words (the tree) plus a distinguished
//! end word. Words use `a b` for generators, `A B` for their inverses, `*`
//! for postfix inversion, and parentheses for grouping.

use std::collections::BTreeSet;
use thiserror::Error;

/// `1 = a`, `-1 = A`, `2 = b`, `-2 = B`.
pub type Letter = i8;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum MunnError {
    #[error("parse error at byte {at}: {reason}")]
    Parse { at: usize, reason: String },
    #[error("word {word:?} is not an idempotent")]
    NotIdempotent { word: String },
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct MunnTree {
    tree: BTreeSet<Vec<Letter>>,
    end: Vec<Letter>,
}

fn reduced_concat(u: &[Letter], w: &[Letter]) -> Vec<Letter> {
    let mut out = u.to_vec();
    for &c in w {
        if out.last() == Some(&-c) {
            out.pop();
        } else {
            out.push(c);
        }
    }
    out
}

/// Canonical letter order for deterministic traversals: a, A, b, B.
const LETTERS: [Letter; 4] = [1, -1, 2, -2];

impl MunnTree {
    pub fn letter(c: Letter) -> Self {
        assert!(LETTERS.contains(&c), "letter out of alphabet");
        MunnTree { tree: [vec![], vec![c]].into_iter().collect(), end: vec![c] }
    }

    fn check(self) -> Self {
        debug_assert!(self.tree.contains(&self.end));
        debug_assert!(self.tree.iter().all(|w| {
            w.is_empty() || self.tree.contains(&w[..w.len() - 1].to_vec())
        }));
        self
    }

    pub fn multiply(&self, other: &Self) -> Self {
        let mut tree = self.tree.clone();
        tree.extend(other.tree.iter().map(|w| reduced_concat(&self.end, w)));
        MunnTree { tree, end: reduced_concat(&self.end, &other.end) }.check()
    }

    pub fn inverse(&self) -> Self {
        let back: Vec<Letter> = self.end.iter().rev().map(|&c| -c).collect();
        let tree = self.tree.iter().map(|w| reduced_concat(&back, w)).collect();
        MunnTree { tree, end: back }.check()
    }

    pub fn is_idempotent(&self) -> bool {
        self.end.is_empty()
    }

    /// Natural order: `s <= t` iff `s = e t` for an idempotent `e`, which here
    /// means equal ends and a tree containing the other's.
    pub fn leq(&self, other: &Self) -> bool {
        self.end == other.end && other.tree.is_subset(&self.tree)
    }

    /// Least common upper bound of two idempotents, when one exists. The
    /// candidate is the tree intersection; a bare root would be the missing
    /// empty word, so that case reports no bound.
    pub fn upper_bound(&self, other: &Self) -> Result<Option<Self>, MunnError> {
        for x in [self, other] {
            if !x.is_idempotent() {
                return Err(MunnError::NotIdempotent { word: x.to_word() });
            }
        }
        let tree: BTreeSet<Vec<Letter>> = self.tree.intersection(&other.tree).cloned().collect();
        if tree.len() <= 1 {
            return Ok(None);
        }
        Ok(Some(MunnTree { tree, end: vec![] }.check()))
    }

    pub fn tree_size(&self) -> usize {
        self.tree.len()
    }

    /// A word evaluating back to this element: an Euler tour of the tree
    /// followed by the path to the end word.
    pub fn to_word(&self) -> String {
        fn tour(tree: &BTreeSet<Vec<Letter>>, node: &mut Vec<Letter>, out: &mut Vec<Letter>) {
            for c in LETTERS {
                if node.last() == Some(&-c) {
                    continue;
                }
                node.push(c);
                if tree.contains(node) {
                    out.push(c);
                    tour(tree, node, out);
                    out.push(-c);
                }
                node.pop();
            }
        }
        let mut letters = Vec::new();
        tour(&self.tree, &mut Vec::new(), &mut letters);
        letters.extend_from_slice(&self.end);
        assert!(!letters.is_empty(), "the identity has no word form");
        letters
            .into_iter()
            .map(|c| match c {
                1 => 'a',
                -1 => 'A',
                2 => 'b',
                -2 => 'B',
                _ => unreachable!(),
            })
            .collect()
    }
}

struct Parser<'a> {
    bytes: &'a [u8],
    at: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, reason: impl Into<String>) -> Result<T, MunnError> {
        Err(MunnError::Parse { at: self.at, reason: reason.into() })
    }

    fn peek(&mut self) -> Option<u8> {
        while self.bytes.get(self.at) == Some(&b' ') {
            self.at += 1;
        }
        self.bytes.get(self.at).copied()
    }

    fn sequence(&mut self) -> Result<MunnTree, MunnError> {
        let mut acc: Option<MunnTree> = None;
        loop {
            let factor = match self.peek() {
                Some(b'a') => self.leaf(1)?,
                Some(b'A') => self.leaf(-1)?,
                Some(b'b') => self.leaf(2)?,
                Some(b'B') => self.leaf(-2)?,
                Some(b'(') => {
                    self.at += 1;
                    let inner = self.sequence()?;
                    if self.peek() != Some(b')') {
                        return self.err("expected ')'");
                    }
                    self.at += 1;
                    self.stars(inner)?
                }
                Some(b'*') => return self.err("'*' needs a word to its left"),
                Some(b')') | None => break,
                Some(c) => return self.err(format!("unexpected character {:?}", c as char)),
            };
            acc = Some(match acc {
                None => factor,
                Some(prev) => prev.multiply(&factor),
            });
        }
        match acc {
            Some(t) => Ok(t),
            None => self.err("empty word"),
        }
    }

    fn leaf(&mut self, c: Letter) -> Result<MunnTree, MunnError> {
        self.at += 1;
        self.stars(MunnTree::letter(c))
    }

    fn stars(&mut self, mut t: MunnTree) -> Result<MunnTree, MunnError> {
        while self.peek() == Some(b'*') {
            self.at += 1;
            t = t.inverse();
        }
        Ok(t)
    }
}

pub fn parse_word(input: &str) -> Result<MunnTree, MunnError> {
    let mut p = Parser { bytes: input.as_bytes(), at: 0 };
    let t = p.sequence()?;
    match p.peek() {
        None => Ok(t),
        Some(b')') => p.err("unmatched ')'"),
        Some(c) => p.err(format!("unexpected character {:?}", c as char)),
    }
}
