//! Split-history vertex names.
//!
//! A name is a base symbol from `0..=d/2` followed by a bit string that records
//! which copy the vertex became at every doubling it survived. The same name
//! doubles as the routing address in the self-healing simulator.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::ParseError;

/// Longest bit string a name can carry.
pub const MAX_NAME_BITS: u8 = 63;

/// A vertex identifier: `base:bits`.
///
/// Bits are packed into `path` with the first bit most significant, so two
/// names of equal length compare lexicographically by comparing `path`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct VertexName {
    len: u8,
    base: u32,
    path: u64,
}

impl VertexName {
    /// A name with an empty bit string.
    pub fn root(base: u32) -> Self {
        VertexName {
            len: 0,
            base,
            path: 0,
        }
    }

    /// Builds a name from an explicit bit sequence.
    pub fn from_bits(base: u32, bits: &[bool]) -> Self {
        assert!(bits.len() <= MAX_NAME_BITS as usize, "name too long");
        bits.iter()
            .fold(Self::root(base), |name, &bit| name.child(bit))
    }

    /// Builds a name from a packed path of `len` bits.
    pub fn from_path(base: u32, path: u64, len: u8) -> Self {
        assert!(len <= MAX_NAME_BITS, "name too long");
        assert!(len == 64 || path >> len == 0, "path wider than its length");
        VertexName { len, base, path }
    }

    /// The all-zeros name of the given length: the coordinator address.
    pub fn zeros(len: u8) -> Self {
        Self::from_path(0, 0, len)
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    /// Number of bits after the base symbol.
    pub fn len(&self) -> u8 {
        self.len
    }

    pub fn is_root(&self) -> bool {
        self.len == 0
    }

    pub fn path(&self) -> u64 {
        self.path
    }

    pub fn bits(&self) -> Vec<bool> {
        (0..self.len)
            .rev()
            .map(|shift| (self.path >> shift) & 1 == 1)
            .collect()
    }

    /// Appends one bit.
    pub fn child(&self, bit: bool) -> Self {
        assert!(self.len < MAX_NAME_BITS, "name too long");
        VertexName {
            len: self.len + 1,
            base: self.base,
            path: (self.path << 1) | bit as u64,
        }
    }

    /// Drops the last bit; `None` for a root name.
    pub fn parent(&self) -> Option<Self> {
        (self.len > 0).then(|| VertexName {
            len: self.len - 1,
            base: self.base,
            path: self.path >> 1,
        })
    }

    pub fn last_bit(&self) -> Option<bool> {
        (self.len > 0).then_some(self.path & 1 == 1)
    }

    /// The other copy produced by the same split.
    pub fn sibling(&self) -> Option<Self> {
        (self.len > 0).then_some(VertexName {
            path: self.path ^ 1,
            ..*self
        })
    }

    /// Base 0 with only zero bits.
    pub fn is_all_zeros(&self) -> bool {
        self.base == 0 && self.path == 0
    }

    /// Truncates to `len` bits (no-op if already shorter).
    pub fn truncate(&self, len: u8) -> Self {
        if len >= self.len {
            return *self;
        }
        VertexName {
            len,
            base: self.base,
            path: self.path >> (self.len - len),
        }
    }

    /// Pads with zero bits up to `len`.
    pub fn zero_extend(&self, len: u8) -> Self {
        if len <= self.len {
            return *self;
        }
        assert!(len <= MAX_NAME_BITS, "name too long");
        VertexName {
            len,
            base: self.base,
            path: self.path << (len - self.len),
        }
    }

    /// Split identity: a vertex keeps its identity when it becomes its own
    /// `0`-copy, so trailing zeros are not part of the identity.
    pub fn identity(&self) -> (u32, u64) {
        if self.path == 0 {
            return (self.base, 0);
        }
        let tz = self.path.trailing_zeros();
        // keep a marker bit above the meaningful prefix so "1" and "01" differ
        let meaningful = self.len as u32 - tz;
        (self.base, (self.path >> tz) | (1u64 << meaningful))
    }

    /// True when both names denote the same vertex at different split depths.
    pub fn same_vertex(&self, other: &VertexName) -> bool {
        self.identity() == other.identity()
    }

    /// True if `self` is a (non-strict) prefix of `other`.
    pub fn is_prefix_of(&self, other: &VertexName) -> bool {
        self.base == other.base && self.len <= other.len && other.truncate(self.len) == *self
    }
}

impl Ord for VertexName {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.len, self.base, self.path).cmp(&(other.len, other.base, other.path))
    }
}

impl PartialOrd for VertexName {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for VertexName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.base)?;
        for bit in self.bits() {
            f.write_str(if bit { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for VertexName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for VertexName {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (base, bits) = s
            .split_once(':')
            .ok_or_else(|| ParseError::Name(s.to_string()))?;
        let base: u32 = base.parse().map_err(|_| ParseError::Name(s.to_string()))?;
        if bits.len() > MAX_NAME_BITS as usize {
            return Err(ParseError::Name(s.to_string()));
        }
        let mut name = VertexName::root(base);
        for c in bits.chars() {
            name = match c {
                '0' => name.child(false),
                '1' => name.child(true),
                _ => return Err(ParseError::Name(s.to_string())),
            };
        }
        Ok(name)
    }
}

impl serde::Serialize for VertexName {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for VertexName {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(s: &str) -> VertexName {
        s.parse().unwrap()
    }

    #[test]
    fn display_round_trips() {
        for s in ["0:", "3:", "2:0110", "0:1"] {
            assert_eq!(n(s).to_string(), s);
        }
        assert!("x:01".parse::<VertexName>().is_err());
        assert!("1:012".parse::<VertexName>().is_err());
        assert!("101".parse::<VertexName>().is_err());
    }

    #[test]
    fn canonical_order_is_length_then_base_then_bits() {
        let mut names = [n("1:0"), n("0:1"), n("3:"), n("0:0"), n("2:"), n("0:00")];
        names.sort();
        let rendered: Vec<_> = names.iter().map(|x| x.to_string()).collect();
        assert_eq!(rendered, ["2:", "3:", "0:0", "0:1", "1:0", "0:00"]);
    }

    #[test]
    fn parent_child_sibling() {
        let a = n("2:01");
        assert_eq!(a.parent(), Some(n("2:0")));
        assert_eq!(a.sibling(), Some(n("2:00")));
        assert_eq!(n("2:0").child(true), n("2:01"));
        assert_eq!(n("2:").parent(), None);
        assert_eq!(a.last_bit(), Some(true));
    }

    #[test]
    fn identity_ignores_trailing_zeros_only() {
        assert!(n("1:").same_vertex(&n("1:0")));
        assert!(n("1:1").same_vertex(&n("1:100")));
        assert!(!n("1:1").same_vertex(&n("1:01")));
        assert!(!n("1:").same_vertex(&n("1:1")));
        assert!(!n("0:").same_vertex(&n("1:")));
        assert!(n("0:000").is_all_zeros());
    }

    #[test]
    fn prefix_relation() {
        assert!(n("1:").is_prefix_of(&n("1:01")));
        assert!(n("1:0").is_prefix_of(&n("1:01")));
        assert!(!n("1:1").is_prefix_of(&n("1:01")));
        assert_eq!(n("1:011").truncate(1), n("1:0"));
        assert_eq!(n("1:1").zero_extend(3), n("1:100"));
    }
}
