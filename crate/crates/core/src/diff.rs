//! Edit distance and edit opcodes.
//!
//! [`opcodes`] follows the classic Ratcliff/Obershelp "gestalt" matcher as
//! implemented by Python's `difflib.SequenceMatcher` with no junk and
//! `autojunk=False`: find the longest matching block (earliest in `a`, then
//! earliest in `b` on ties), recurse on both sides, merge adjacent blocks,
//! and read opcodes off the gaps.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::Range;

use serde::{Deserialize, Serialize};

use crate::Error;

/// Character-level Levenshtein distance over unicode scalar values, unit costs.
pub fn levenshtein(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    if a.is_empty() {
        return b.len();
    }
    if b.is_empty() {
        return a.len();
    }
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    let mut cur = vec![0; b.len() + 1];
    for (i, ca) in a.iter().enumerate() {
        cur[0] = i + 1;
        for (j, cb) in b.iter().enumerate() {
            let sub = prev[j] + usize::from(ca != cb);
            cur[j + 1] = sub.min(prev[j + 1] + 1).min(cur[j] + 1);
        }
        core::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tag {
    Equal,
    Replace,
    Insert,
    Delete,
}

impl Tag {
    pub fn as_str(self) -> &'static str {
        match self {
            Tag::Equal => "equal",
            Tag::Replace => "replace",
            Tag::Insert => "insert",
            Tag::Delete => "delete",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Opcode {
    pub tag: Tag,
    pub src: Range<usize>,
    pub tgt: Range<usize>,
}

/// Opcodes whose source and target ranges each partition their sequence in order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpcodeAlignment {
    pub opcodes: Vec<Opcode>,
}

impl OpcodeAlignment {
    pub fn iter(&self) -> core::slice::Iter<'_, Opcode> {
        self.opcodes.iter()
    }

    pub fn source_len(&self) -> usize {
        self.opcodes.last().map_or(0, |op| op.src.end)
    }

    pub fn target_len(&self) -> usize {
        self.opcodes.last().map_or(0, |op| op.tgt.end)
    }

    /// Rebuilds the target from the source by applying every opcode.
    pub fn apply<T: Clone>(&self, source: &[T], target: &[T]) -> Vec<T> {
        let mut out = Vec::with_capacity(target.len());
        for op in &self.opcodes {
            match op.tag {
                Tag::Equal => out.extend_from_slice(&source[op.src.clone()]),
                Tag::Replace | Tag::Insert => out.extend_from_slice(&target[op.tgt.clone()]),
                Tag::Delete => {}
            }
        }
        out
    }
}

struct Matcher<'a, T> {
    a: &'a [T],
    b: &'a [T],
    b2j: BTreeMap<&'a T, Vec<usize>>,
}

impl<'a, T: Ord> Matcher<'a, T> {
    fn new(a: &'a [T], b: &'a [T]) -> Self {
        let mut b2j: BTreeMap<&T, Vec<usize>> = BTreeMap::new();
        for (j, elt) in b.iter().enumerate() {
            b2j.entry(elt).or_default().push(j);
        }
        Matcher { a, b, b2j }
    }

    /// Longest block `a[i..i+k] == b[j..j+k]` inside the given windows.
    /// Ties go to the smallest `i`, then the smallest `j`.
    fn longest_match(
        &self,
        alo: usize,
        ahi: usize,
        blo: usize,
        bhi: usize,
    ) -> (usize, usize, usize) {
        let (mut besti, mut bestj, mut bestsize) = (alo, blo, 0);
        // j2len[j + 1] = length of the match ending at a[i-1], b[j].
        let mut j2len = vec![0usize; self.b.len() + 1];
        let mut next = vec![0usize; self.b.len() + 1];
        let mut touched: Vec<usize> = Vec::new();
        let mut next_touched: Vec<usize> = Vec::new();
        for i in alo..ahi {
            if let Some(js) = self.b2j.get(&self.a[i]) {
                for &j in js {
                    if j < blo {
                        continue;
                    }
                    if j >= bhi {
                        break;
                    }
                    let k = j2len[j] + 1;
                    next[j + 1] = k;
                    next_touched.push(j + 1);
                    if k > bestsize {
                        besti = i + 1 - k;
                        bestj = j + 1 - k;
                        bestsize = k;
                    }
                }
            }
            for &t in &touched {
                j2len[t] = 0;
            }
            core::mem::swap(&mut j2len, &mut next);
            core::mem::swap(&mut touched, &mut next_touched);
            next_touched.clear();
        }
        // Without junk the block found above is already maximal; these loops
        // mirror the reference matcher and never fire in practice.
        while besti > alo && bestj > blo && self.a[besti - 1] == self.b[bestj - 1] {
            besti -= 1;
            bestj -= 1;
            bestsize += 1;
        }
        while besti + bestsize < ahi
            && bestj + bestsize < bhi
            && self.a[besti + bestsize] == self.b[bestj + bestsize]
        {
            bestsize += 1;
        }
        (besti, bestj, bestsize)
    }

    fn matching_blocks(&self) -> Vec<(usize, usize, usize)> {
        let (la, lb) = (self.a.len(), self.b.len());
        let mut queue = vec![(0, la, 0, lb)];
        let mut blocks = Vec::new();
        while let Some((alo, ahi, blo, bhi)) = queue.pop() {
            let (i, j, k) = self.longest_match(alo, ahi, blo, bhi);
            if k > 0 {
                blocks.push((i, j, k));
                if alo < i && blo < j {
                    queue.push((alo, i, blo, j));
                }
                if i + k < ahi && j + k < bhi {
                    queue.push((i + k, ahi, j + k, bhi));
                }
            }
        }
        blocks.sort_unstable();

        let mut merged = Vec::with_capacity(blocks.len() + 1);
        let (mut i1, mut j1, mut k1) = (0, 0, 0);
        for (i2, j2, k2) in blocks {
            if i1 + k1 == i2 && j1 + k1 == j2 {
                k1 += k2;
            } else {
                if k1 > 0 {
                    merged.push((i1, j1, k1));
                }
                (i1, j1, k1) = (i2, j2, k2);
            }
        }
        if k1 > 0 {
            merged.push((i1, j1, k1));
        }
        merged.push((la, lb, 0));
        merged
    }
}

/// Edit opcodes turning `source` into `target`.
pub fn opcodes<T: Ord>(source: &[T], target: &[T]) -> OpcodeAlignment {
    let matcher = Matcher::new(source, target);
    let mut ops = Vec::new();
    let (mut i, mut j) = (0, 0);
    for (ai, bj, size) in matcher.matching_blocks() {
        let tag = match (i < ai, j < bj) {
            (true, true) => Some(Tag::Replace),
            (true, false) => Some(Tag::Delete),
            (false, true) => Some(Tag::Insert),
            (false, false) => None,
        };
        if let Some(tag) = tag {
            ops.push(Opcode {
                tag,
                src: i..ai,
                tgt: j..bj,
            });
        }
        i = ai + size;
        j = bj + size;
        if size > 0 {
            ops.push(Opcode {
                tag: Tag::Equal,
                src: ai..i,
                tgt: bj..j,
            });
        }
    }
    OpcodeAlignment { opcodes: ops }
}

/// `mask[i]` is true when target token `i` was produced by a replace or insert.
pub fn edited_target_mask(align: &OpcodeAlignment, target_len: usize) -> Result<Vec<bool>, Error> {
    let covered = align.target_len();
    if covered != target_len {
        return Err(Error::LengthMismatch {
            expected: covered,
            actual: target_len,
        });
    }
    let mut mask = vec![false; target_len];
    for op in align.iter() {
        if matches!(op.tag, Tag::Replace | Tag::Insert) {
            mask[op.tgt.clone()].iter_mut().for_each(|m| *m = true);
        }
    }
    Ok(mask)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn op(tag: Tag, src: Range<usize>, tgt: Range<usize>) -> Opcode {
        Opcode { tag, src, tgt }
    }

    #[test]
    fn levenshtein_examples() {
        assert_eq!(levenshtein("abc", "abc"), 0);
        assert_eq!(levenshtein("abc", ""), 3);
        assert_eq!(levenshtein("", "abc"), 3);
        assert_eq!(levenshtein("kitten", "sitting"), 3);
        assert_eq!(levenshtein("né", "ne"), 1);
    }

    #[test]
    fn opcodes_examples() {
        assert_eq!(
            opcodes(&["a", "b", "c"], &["a", "b", "c"]).opcodes,
            vec![op(Tag::Equal, 0..3, 0..3)]
        );
        assert_eq!(
            opcodes(&["a", "b", "c"], &["a", "x", "c"]).opcodes,
            vec![
                op(Tag::Equal, 0..1, 0..1),
                op(Tag::Replace, 1..2, 1..2),
                op(Tag::Equal, 2..3, 2..3)
            ]
        );
        let empty: [&str; 0] = [];
        assert_eq!(
            opcodes(&empty, &["a", "b"]).opcodes,
            vec![op(Tag::Insert, 0..0, 0..2)]
        );
        assert_eq!(
            opcodes(&["a", "b"], &empty).opcodes,
            vec![op(Tag::Delete, 0..2, 0..0)]
        );
        assert!(opcodes(&empty, &empty).opcodes.is_empty());
    }

    #[test]
    fn masks() {
        let same = opcodes(&["a", "b", "c"], &["a", "b", "c"]);
        assert_eq!(edited_target_mask(&same, 3).unwrap(), vec![false; 3]);
        let rep = opcodes(&["a", "b", "c"], &["a", "x", "c"]);
        assert_eq!(
            edited_target_mask(&rep, 3).unwrap(),
            vec![false, true, false]
        );
        let ins = opcodes(&[] as &[&str], &["a", "b"]);
        assert_eq!(edited_target_mask(&ins, 2).unwrap(), vec![true, true]);
        assert!(matches!(
            edited_target_mask(&ins, 3),
            Err(Error::LengthMismatch { .. })
        ));
    }
}
