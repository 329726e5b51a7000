use std::collections::HashSet;
use std::fmt;

use super::{PolyError, Result};

/// Monomials are single-word bitsets, so a context holds at most 64 variables.
pub const MAX_VARIABLES: usize = 64;

/// Ordered, duplicate-free list of variable names. Index `i` is variable `x_{i+1}`
/// and precedes every later index in all term orders.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VariableContext {
    names: Vec<String>,
}

impl VariableContext {
    pub fn new<I, S>(names: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.is_empty() || names.len() > MAX_VARIABLES {
            return Err(PolyError::InvalidContext(format!(
                "expected 1..={MAX_VARIABLES} variables, got {}",
                names.len()
            )));
        }
        let mut seen = HashSet::new();
        for name in &names {
            if !is_identifier(name) {
                return Err(PolyError::InvalidContext(format!(
                    "`{name}` is not a valid variable name"
                )));
            }
            if !seen.insert(name.as_str()) {
                return Err(PolyError::InvalidContext(format!("duplicate variable `{name}`")));
            }
        }
        Ok(Self { names })
    }

    /// `x1, x2, ..., xn`
    pub fn numbered(n: usize) -> Result<Self> {
        Self::new((1..=n).map(|i| format!("x{i}")))
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, index: usize) -> &str {
        &self.names[index]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Mask with one bit per variable.
    pub fn full_mask(&self) -> u64 {
        if self.names.len() == 64 {
            u64::MAX
        } else {
            (1u64 << self.names.len()) - 1
        }
    }

    /// Every point of `{0,1}^n`, in increasing bit-pattern order.
    pub fn all_points(&self) -> impl Iterator<Item = Point> + '_ {
        let n = self.len();
        assert!(n < 64, "cannot enumerate 2^{n} points");
        (0..(1u64 << n)).map(move |bits| Point { bits, len: n })
    }
}

/// Identifier-shaped names keep rendered polynomials parseable.
pub(crate) fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_alphanumeric() || c == '_')
}

/// A 0/1 vector aligned with a context; bit `i` holds the value of variable `i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    bits: u64,
    len: usize,
}

impl Point {
    pub fn from_bits(bits: u64, len: usize) -> Result<Self> {
        if len == 0 || len > MAX_VARIABLES {
            return Err(PolyError::InvalidContext(format!("point of length {len}")));
        }
        let mask = if len == 64 { u64::MAX } else { (1u64 << len) - 1 };
        if bits & !mask != 0 {
            return Err(PolyError::InvalidContext(format!(
                "bits set beyond point length {len}"
            )));
        }
        Ok(Self { bits, len })
    }

    pub fn from_bools(values: &[bool]) -> Result<Self> {
        let bits = values
            .iter()
            .enumerate()
            .fold(0u64, |acc, (i, &v)| if v { acc | (1 << i) } else { acc });
        Self::from_bits(bits, values.len())
    }

    /// Convenience for literals such as `Point::from_slice(&[1, 0])`; nonzero is 1.
    pub fn from_slice(values: &[u8]) -> Result<Self> {
        let bools: Vec<bool> = values.iter().map(|&v| v != 0).collect();
        Self::from_bools(&bools)
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, index: usize) -> bool {
        self.bits >> index & 1 == 1
    }

    pub fn to_vec(&self) -> Vec<u8> {
        (0..self.len).map(|i| self.get(i) as u8).collect()
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}
