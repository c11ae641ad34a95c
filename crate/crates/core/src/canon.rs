//! Balanced binary codes for rooted and free trees.
//!
//! A vertex's code is `1`, then its children's codes in descending order,
//! then `0`; a leaf is therefore `10`. Two rooted trees get the same code
//! exactly when they are isomorphic. Free trees are rooted at their center
//! (or the better of their two centers) first.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use thiserror::Error;

use crate::tree::{Tree, TreeError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodeError {
    #[error("invalid character {0:?} in code")]
    BadChar(char),
    #[error("unbalanced code: {0}")]
    Unbalanced(&'static str),
}

/// Canonical code of a tree. Ordered as the binary number the bits spell:
/// a longer code is larger, equal lengths compare bit by bit.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct CanonicalCode(String);

impl CanonicalCode {
    /// The code reserved for the empty tree.
    pub fn empty() -> Self {
        CanonicalCode(String::new())
    }

    /// Validates `text` as the code of a single tree. The empty text is
    /// accepted as the empty-tree sentinel.
    pub fn parse(text: &str) -> Result<Self, CodeError> {
        let mut depth = 0usize;
        for (i, c) in text.chars().enumerate() {
            match c {
                '1' => {
                    if depth == 0 && i > 0 {
                        return Err(CodeError::Unbalanced("more than one root"));
                    }
                    depth += 1;
                }
                '0' => {
                    if depth == 0 {
                        return Err(CodeError::Unbalanced("prefix closes more than it opens"));
                    }
                    depth -= 1;
                }
                other => return Err(CodeError::BadChar(other)),
            }
        }
        if depth != 0 {
            return Err(CodeError::Unbalanced("unclosed vertices"));
        }
        Ok(CanonicalCode(String::from(text)))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn into_string(self) -> String {
        self.0
    }

    pub fn vertex_count(&self) -> usize {
        self.0.len() / 2
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Compares two codes as binary integers.
pub fn code_compare(a: &str, b: &str) -> Ordering {
    a.len()
        .cmp(&b.len())
        .then_with(|| a.as_bytes().cmp(b.as_bytes()))
}

impl Ord for CanonicalCode {
    fn cmp(&self, other: &Self) -> Ordering {
        code_compare(&self.0, &other.0)
    }
}

impl PartialOrd for CanonicalCode {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for CanonicalCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for CanonicalCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CanonicalCode({:?})", self.0)
    }
}

/// Code of `t` rooted at its own root.
pub fn rooted_code(t: &Tree) -> Result<CanonicalCode, TreeError> {
    let root = t.root().ok_or(TreeError::EmptyTree)?;
    code_rooted_at(t, root)
}

/// Code of `t` as if rooted at `root`, ignoring any stored root.
pub fn code_rooted_at(t: &Tree, root: usize) -> Result<CanonicalCode, TreeError> {
    if t.is_empty() {
        return Err(TreeError::EmptyTree);
    }
    if root >= t.len() {
        return Err(TreeError::InvalidVertex {
            index: root,
            n: t.len(),
        });
    }
    Ok(CanonicalCode(build_code(t, root)))
}

/// Parent of every vertex when `t` hangs from `root` (the root maps to
/// itself), plus the breadth-first order used to fill it.
fn hang(t: &Tree, root: usize) -> (Vec<usize>, Vec<usize>) {
    let order = t.bfs_order(root);
    let mut parent = vec![root; t.len()];
    for &u in &order {
        for &w in t.neighbors(u) {
            if w != root && w != parent[u] {
                parent[w] = u;
            }
        }
    }
    (order, parent)
}

/// Trees up to this size have codes that fit in a `u128`.
const PACKED_MAX_N: usize = 64;

/// A code packed into the low `len` bits of `bits`, first bit most
/// significant. For equal lengths, integer order is code order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
struct Packed {
    len: u32,
    bits: u128,
}

impl Packed {
    fn render(self) -> String {
        (0..self.len)
            .rev()
            .map(|i| if (self.bits >> i) & 1 == 1 { '1' } else { '0' })
            .collect()
    }
}

fn packed_code(t: &Tree, root: usize) -> Packed {
    let (order, parent) = hang(t, root);
    let mut codes = vec![Packed { len: 0, bits: 0 }; t.len()];
    let mut children: Vec<Packed> = Vec::new();
    // Reverse breadth-first order visits every child before its parent.
    for &u in order.iter().rev() {
        children.clear();
        children.extend(
            t.neighbors(u)
                .iter()
                .filter(|&&w| w != parent[u])
                .map(|&w| codes[w]),
        );
        children.sort_unstable_by(|a, b| b.cmp(a));
        let mut code = Packed { len: 1, bits: 1 };
        for c in &children {
            code.bits = (code.bits << c.len) | c.bits;
            code.len += c.len;
        }
        code.bits <<= 1;
        code.len += 1;
        codes[u] = code;
    }
    codes[root]
}

fn string_code(t: &Tree, root: usize) -> String {
    let (order, parent) = hang(t, root);
    let mut codes: Vec<String> = vec![String::new(); t.len()];
    let mut children: Vec<String> = Vec::new();
    for &u in order.iter().rev() {
        children.clear();
        for &w in t.neighbors(u) {
            if w != parent[u] {
                children.push(core::mem::take(&mut codes[w]));
            }
        }
        children.sort_unstable_by(|a, b| code_compare(b, a));
        let len = 2 + children.iter().map(String::len).sum::<usize>();
        let mut code = String::with_capacity(len);
        code.push('1');
        for c in &children {
            code.push_str(c);
        }
        code.push('0');
        codes[u] = code;
    }
    core::mem::take(&mut codes[root])
}

fn build_code(t: &Tree, root: usize) -> String {
    if t.len() <= PACKED_MAX_N {
        packed_code(t, root).render()
    } else {
        string_code(t, root)
    }
}

/// Code of the free tree `t`, plus the center it was rooted at.
///
/// With two centers the larger code wins; ties keep the lower index.
pub fn canonical_root(t: &Tree) -> Result<(CanonicalCode, usize), TreeError> {
    let centers = t.centers()?;
    if t.len() <= PACKED_MAX_N {
        let mut best = (packed_code(t, centers[0]), centers[0]);
        if let Some(&other) = centers.get(1) {
            let code = packed_code(t, other);
            if code > best.0 {
                best = (code, other);
            }
        }
        return Ok((CanonicalCode(best.0.render()), best.1));
    }
    let mut best = (CanonicalCode(string_code(t, centers[0])), centers[0]);
    if let Some(&other) = centers.get(1) {
        let code = CanonicalCode(string_code(t, other));
        if code > best.0 {
            best = (code, other);
        }
    }
    Ok(best)
}

/// Root-independent code of `t`; the empty tree maps to the empty code.
pub fn free_code(t: &Tree) -> CanonicalCode {
    if t.is_empty() {
        return CanonicalCode::empty();
    }
    match canonical_root(t) {
        Ok((code, _)) => code,
        Err(_) => unreachable!("non-empty tree has a center"),
    }
}

/// Rebuilds the rooted tree a code describes. Vertices are numbered in the
/// order their `1` appears, so the root is vertex 0.
pub fn decode(code: &CanonicalCode) -> Result<Tree, CodeError> {
    let bits = code.as_str();
    if bits.is_empty() {
        return Err(CodeError::Unbalanced("empty code has no root"));
    }
    let n = bits.len() / 2;
    let mut adjacency: Vec<Vec<usize>> = Vec::with_capacity(n);
    let mut stack: Vec<usize> = Vec::with_capacity(n);
    for b in bits.bytes() {
        if b == b'1' {
            let v = adjacency.len();
            adjacency.push(Vec::new());
            if let Some(&p) = stack.last() {
                adjacency[p].push(v);
                adjacency[v].push(p);
            }
            stack.push(v);
        } else if stack.pop().is_none() {
            return Err(CodeError::Unbalanced("prefix closes more than it opens"));
        }
    }
    if !stack.is_empty() || adjacency.len() != n {
        return Err(CodeError::Unbalanced("unclosed vertices"));
    }
    for list in &mut adjacency {
        list.sort_unstable();
    }
    Ok(Tree::from_adjacency(adjacency, Some(0)))
}
