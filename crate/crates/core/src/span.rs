use serde::Serialize;

/// A region of source text. Byte offsets are 0-based and exclusive at the
/// end; lines and columns are 1-based and columns count characters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize)]
pub struct SourceSpan {
    pub byte_start: usize,
    pub byte_end: usize,
    pub line_start: usize,
    pub col_start: usize,
    pub line_end: usize,
    pub col_end: usize,
}

impl SourceSpan {
    pub fn new(
        byte_start: usize,
        byte_end: usize,
        (line_start, col_start): (usize, usize),
        (line_end, col_end): (usize, usize),
    ) -> Self {
        Self {
            byte_start,
            byte_end,
            line_start,
            col_start,
            line_end,
            col_end,
        }
    }

    /// Smallest span covering both `self` and `other`.
    pub fn cover(self, other: SourceSpan) -> SourceSpan {
        let (first, _) = if self.byte_start <= other.byte_start {
            (self, other)
        } else {
            (other, self)
        };
        let last = if self.byte_end >= other.byte_end {
            self
        } else {
            other
        };
        SourceSpan {
            byte_start: first.byte_start,
            line_start: first.line_start,
            col_start: first.col_start,
            byte_end: last.byte_end,
            line_end: last.line_end,
            col_end: last.col_end,
        }
    }

    pub fn len(&self) -> usize {
        self.byte_end - self.byte_start
    }

    pub fn is_empty(&self) -> bool {
        self.byte_end == self.byte_start
    }
}
