//! Parser for the byte-oriented regex dialect.
//!
//! Supported: literals, `.` (any byte), bracket classes with ranges and
//! negation, escapes (`\\`, escaped metacharacters, `\n`, `\t`, `\r`,
//! `\xHH`, `\d`, `\w`, `\s`), alternation, groups, and the quantifiers
//! `*`, `+`, `?`, `{m}`, `{m,n}`, `{m,}`. Matching is case-sensitive over
//! raw bytes. Anchors, backreferences and lookaround are rejected rather
//! than silently ignored.

use crate::byteset::ByteSet;
use crate::error::{ParseError, ParseErrorKind};

/// Largest accepted bound in `{m,n}`; the NFA state cap is the real guard,
/// this just keeps bound arithmetic comfortably in range.
const MAX_REPEAT_BOUND: u32 = 100_000;

/// Parsed pattern syntax. Alternation and concatenation of a single child
/// collapse to the child itself.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Ast {
    Literal(u8),
    Class(ByteSet),
    Concat(Vec<Ast>),
    Alternate(Vec<Ast>),
    Repeat {
        node: Box<Ast>,
        min: u32,
        /// `None` means unbounded.
        max: Option<u32>,
    },
    Group(Box<Ast>),
}

pub fn parse_pattern(pattern: &str) -> Result<Ast, ParseError> {
    let mut parser = Parser {
        input: pattern.as_bytes(),
        pos: 0,
    };
    let ast = parser.parse_alternation()?;
    if parser.pos < parser.input.len() {
        // parse_alternation only stops early on ')'.
        return Err(parser.error(ParseErrorKind::UnmatchedParen));
    }
    Ok(ast)
}

fn class_digit() -> ByteSet {
    ByteSet::range(b'0', b'9')
}

fn class_word() -> ByteSet {
    ByteSet::range(b'0', b'9')
        .union(&ByteSet::range(b'A', b'Z'))
        .union(&ByteSet::range(b'a', b'z'))
        .union(&ByteSet::singleton(b'_'))
}

fn class_space() -> ByteSet {
    let mut set = ByteSet::EMPTY;
    for b in [b' ', b'\t', b'\n', b'\r', 0x0b, 0x0c] {
        set.insert(b);
    }
    set
}

struct Parser<'a> {
    input: &'a [u8],
    pos: usize,
}

/// One escape or literal item, which is either a single byte (usable as a
/// range endpoint) or a whole set (`\d` and friends).
enum ClassItem {
    Byte(u8),
    Set(ByteSet),
}

impl<'a> Parser<'a> {
    fn error(&self, kind: ParseErrorKind) -> ParseError {
        ParseError {
            offset: self.pos,
            kind,
        }
    }

    fn error_at(&self, offset: usize, kind: ParseErrorKind) -> ParseError {
        ParseError { offset, kind }
    }

    fn peek(&self) -> Option<u8> {
        self.input.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let b = self.peek()?;
        self.pos += 1;
        Some(b)
    }

    fn parse_alternation(&mut self) -> Result<Ast, ParseError> {
        let mut branches = vec![self.parse_concat()?];
        while self.peek() == Some(b'|') {
            self.pos += 1;
            branches.push(self.parse_concat()?);
        }
        Ok(if branches.len() == 1 {
            branches.pop().unwrap()
        } else {
            Ast::Alternate(branches)
        })
    }

    fn parse_concat(&mut self) -> Result<Ast, ParseError> {
        let mut items = Vec::new();
        loop {
            match self.peek() {
                None | Some(b'|') | Some(b')') => break,
                _ => items.push(self.parse_repeat()?),
            }
        }
        Ok(if items.len() == 1 {
            items.pop().unwrap()
        } else {
            Ast::Concat(items)
        })
    }

    fn parse_repeat(&mut self) -> Result<Ast, ParseError> {
        let mut node = self.parse_atom()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    node = Ast::Repeat {
                        node: Box::new(node),
                        min: 0,
                        max: None,
                    };
                }
                Some(b'+') => {
                    self.pos += 1;
                    node = Ast::Repeat {
                        node: Box::new(node),
                        min: 1,
                        max: None,
                    };
                }
                Some(b'?') => {
                    self.pos += 1;
                    node = Ast::Repeat {
                        node: Box::new(node),
                        min: 0,
                        max: Some(1),
                    };
                }
                Some(b'{') => match self.try_parse_bounds()? {
                    Some((min, max)) => {
                        node = Ast::Repeat {
                            node: Box::new(node),
                            min,
                            max,
                        };
                    }
                    // Not bound syntax; '{' is a literal atom for the
                    // enclosing concatenation.
                    None => break,
                },
                _ => break,
            }
        }
        Ok(node)
    }

    /// Attempts to read `{m}`, `{m,}` or `{m,n}` at the current position.
    /// Consumes nothing unless the braces form a structurally valid bound.
    fn try_parse_bounds(&mut self) -> Result<Option<(u32, Option<u32>)>, ParseError> {
        let start = self.pos;
        debug_assert_eq!(self.peek(), Some(b'{'));
        let mut pos = self.pos + 1;
        let read_int = |pos: &mut usize| -> Option<u64> {
            let begin = *pos;
            while *pos < self.input.len() && self.input[*pos].is_ascii_digit() {
                *pos += 1;
            }
            if *pos == begin {
                return None;
            }
            let mut value: u64 = 0;
            for &d in &self.input[begin..*pos] {
                value = value.saturating_mul(10).saturating_add(u64::from(d - b'0'));
            }
            Some(value)
        };
        let Some(min) = read_int(&mut pos) else {
            return Ok(None);
        };
        let max = match self.input.get(pos) {
            Some(b'}') => Some(min),
            Some(b',') => {
                pos += 1;
                match read_int(&mut pos) {
                    Some(n) if self.input.get(pos) == Some(&b'}') => Some(n),
                    None if self.input.get(pos) == Some(&b'}') => None,
                    _ => return Ok(None),
                }
            }
            _ => return Ok(None),
        };
        // Structurally a bound; bad values are hard errors from here on.
        if min > MAX_REPEAT_BOUND as u64 || max.is_some_and(|n| n > MAX_REPEAT_BOUND as u64) {
            return Err(self.error_at(start, ParseErrorKind::RepeatBoundTooLarge));
        }
        if let Some(n) = max {
            if min > n {
                return Err(self.error_at(start, ParseErrorKind::RepeatBoundsOutOfOrder));
            }
        }
        self.pos = pos + 1;
        Ok(Some((min as u32, max.map(|n| n as u32))))
    }

    fn parse_atom(&mut self) -> Result<Ast, ParseError> {
        let at = self.pos;
        match self
            .bump()
            .ok_or_else(|| self.error(ParseErrorKind::UnexpectedEnd))?
        {
            b'(' => {
                if self.peek() == Some(b'?') {
                    return Err(self.error_at(
                        at,
                        ParseErrorKind::Unsupported("group modifiers, inline flags and lookaround"),
                    ));
                }
                let inner = self.parse_alternation()?;
                if self.bump() != Some(b')') {
                    return Err(self.error_at(at, ParseErrorKind::UnclosedGroup));
                }
                Ok(Ast::Group(Box::new(inner)))
            }
            b'[' => self.parse_class(at),
            b'.' => Ok(Ast::Class(ByteSet::FULL)),
            b'\\' => {
                let item = self.parse_escape(at, false)?;
                Ok(match item {
                    ClassItem::Byte(b) => Ast::Literal(b),
                    ClassItem::Set(set) => Ast::Class(set),
                })
            }
            b'^' => Err(self.error_at(at, ParseErrorKind::Unsupported("anchor '^'"))),
            b'$' => Err(self.error_at(at, ParseErrorKind::Unsupported("anchor '$'"))),
            b'*' | b'+' | b'?' => Err(self.error_at(at, ParseErrorKind::NothingToRepeat)),
            b'{' => {
                // A structurally valid bound here has nothing to repeat;
                // otherwise '{' is an ordinary literal.
                self.pos = at;
                match self.try_parse_bounds()? {
                    Some(_) => Err(self.error_at(at, ParseErrorKind::NothingToRepeat)),
                    None => {
                        self.pos = at + 1;
                        Ok(Ast::Literal(b'{'))
                    }
                }
            }
            b => Ok(Ast::Literal(b)),
        }
    }

    /// Parses one escape sequence. The leading backslash is consumed; `at`
    /// is its offset. Class context admits no backreference diagnostics.
    fn parse_escape(&mut self, at: usize, in_class: bool) -> Result<ClassItem, ParseError> {
        let b = self
            .bump()
            .ok_or_else(|| self.error(ParseErrorKind::UnexpectedEnd))?;
        match b {
            b'\\' => Ok(ClassItem::Byte(b'\\')),
            b'n' => Ok(ClassItem::Byte(b'\n')),
            b't' => Ok(ClassItem::Byte(b'\t')),
            b'r' => Ok(ClassItem::Byte(b'\r')),
            b'x' => {
                let hi = self.bump();
                let lo = self.bump();
                match (hi.and_then(hex_value), lo.and_then(hex_value)) {
                    (Some(hi), Some(lo)) => Ok(ClassItem::Byte(hi << 4 | lo)),
                    _ => Err(self.error_at(at, ParseErrorKind::BadHexEscape)),
                }
            }
            b'd' => Ok(ClassItem::Set(class_digit())),
            b'w' => Ok(ClassItem::Set(class_word())),
            b's' => Ok(ClassItem::Set(class_space())),
            b'1'..=b'9' if !in_class => {
                Err(self.error_at(at, ParseErrorKind::Unsupported("backreferences")))
            }
            b'b' | b'B' | b'A' | b'z' | b'Z' if !in_class => Err(self.error_at(
                at,
                ParseErrorKind::Unsupported("anchors and boundary escapes"),
            )),
            b if b.is_ascii_punctuation() => Ok(ClassItem::Byte(b)),
            _ => Err(self.error_at(at, ParseErrorKind::BadEscape)),
        }
    }

    /// Parses a bracket class body; `at` is the offset of the opening '['.
    fn parse_class(&mut self, at: usize) -> Result<Ast, ParseError> {
        let negated = if self.peek() == Some(b'^') {
            self.pos += 1;
            true
        } else {
            false
        };
        let mut set = ByteSet::EMPTY;
        let mut first = true;
        loop {
            let item_at = self.pos;
            let b = match self.bump() {
                None => return Err(self.error_at(at, ParseErrorKind::UnclosedClass)),
                Some(b']') if !first => break,
                Some(b) => b,
            };
            first = false;
            let item = match b {
                b'\\' => self.parse_escape(item_at, true)?,
                b => ClassItem::Byte(b),
            };
            match item {
                ClassItem::Set(s) => set = set.union(&s),
                ClassItem::Byte(lo) => {
                    // 'x-y' is a range unless the dash closes the class.
                    if self.peek() == Some(b'-') && self.input.get(self.pos + 1) != Some(&b']') {
                        self.pos += 1;
                        let end_at = self.pos;
                        let hi = match self.bump() {
                            None => return Err(self.error_at(at, ParseErrorKind::UnclosedClass)),
                            Some(b'\\') => match self.parse_escape(end_at, true)? {
                                ClassItem::Byte(b) => b,
                                ClassItem::Set(_) => {
                                    return Err(self.error_at(end_at, ParseErrorKind::BadClassRange))
                                }
                            },
                            Some(b) => b,
                        };
                        if lo > hi {
                            return Err(self.error_at(item_at, ParseErrorKind::BadClassRange));
                        }
                        set = set.union(&ByteSet::range(lo, hi));
                    } else {
                        set.insert(lo);
                    }
                }
            }
        }
        let set = if negated { set.negate() } else { set };
        if set.is_empty() {
            return Err(self.error_at(at, ParseErrorKind::EmptyClass));
        }
        Ok(Ast::Class(set))
    }
}

fn hex_value(b: u8) -> Option<u8> {
    match b {
        b'0'..=b'9' => Some(b - b'0'),
        b'a'..=b'f' => Some(b - b'a' + 10),
        b'A'..=b'F' => Some(b - b'A' + 10),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lit(b: u8) -> Ast {
        Ast::Literal(b)
    }

    #[test]
    fn golden_mode_plus_l() {
        let ast = parse_pattern("mode+l").unwrap();
        assert_eq!(
            ast,
            Ast::Concat(vec![
                lit(b'm'),
                lit(b'o'),
                lit(b'd'),
                Ast::Repeat {
                    node: Box::new(lit(b'e')),
                    min: 1,
                    max: None
                },
                lit(b'l'),
            ])
        );
    }

    #[test]
    fn single_literal() {
        assert_eq!(parse_pattern("a").unwrap(), lit(0x61));
    }

    #[test]
    fn negated_class_with_bounds() {
        let ast = parse_pattern("[^a]{2,3}").unwrap();
        let expected_set = ByteSet::singleton(b'a').negate();
        assert_eq!(
            ast,
            Ast::Repeat {
                node: Box::new(Ast::Class(expected_set)),
                min: 2,
                max: Some(3)
            }
        );
    }

    #[test]
    fn dot_matches_any_byte() {
        assert_eq!(parse_pattern(".").unwrap(), Ast::Class(ByteSet::FULL));
    }

    #[test]
    fn class_ranges_and_escapes() {
        let ast = parse_pattern(r"[a-c\d\x00]").unwrap();
        let Ast::Class(set) = ast else {
            panic!("expected class")
        };
        for b in [b'a', b'b', b'c', b'0', b'9', 0x00] {
            assert!(set.contains(b), "missing {:#04x}", b);
        }
        assert!(!set.contains(b'd'));
        assert_eq!(set.len(), 3 + 10 + 1);
    }

    #[test]
    fn leading_bracket_is_literal() {
        let ast = parse_pattern("[]a]").unwrap();
        let Ast::Class(set) = ast else {
            panic!("expected class")
        };
        assert!(set.contains(b']'));
        assert!(set.contains(b'a'));
        assert_eq!(set.len(), 2);
    }

    #[test]
    fn anchors_rejected() {
        for (pat, offset) in [("^ab", 0), ("ab$", 2)] {
            let err = parse_pattern(pat).unwrap_err();
            assert_eq!(err.offset, offset);
            assert!(matches!(err.kind, ParseErrorKind::Unsupported(_)));
        }
    }

    #[test]
    fn backreference_rejected() {
        let err = parse_pattern(r"(a)\1").unwrap_err();
        assert!(matches!(err.kind, ParseErrorKind::Unsupported(_)));
        assert_eq!(err.offset, 3);
    }

    #[test]
    fn lookaround_rejected() {
        let err = parse_pattern("(?=a)").unwrap_err();
        assert!(matches!(err.kind, ParseErrorKind::Unsupported(_)));
    }

    #[test]
    fn bad_bounds() {
        let err = parse_pattern("a{3,2}").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::RepeatBoundsOutOfOrder);
        assert_eq!(err.offset, 1);
    }

    #[test]
    fn brace_literal_when_not_a_bound() {
        assert_eq!(
            parse_pattern("a{x").unwrap(),
            Ast::Concat(vec![lit(b'a'), lit(b'{'), lit(b'x')])
        );
    }

    #[test]
    fn quantifier_without_atom() {
        let err = parse_pattern("*a").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::NothingToRepeat);
    }

    #[test]
    fn empty_class_rejected() {
        let err = parse_pattern(r"[^\x00-\xff]").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::EmptyClass);
    }

    #[test]
    fn stray_close_paren() {
        let err = parse_pattern("ab)").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::UnmatchedParen);
        assert_eq!(err.offset, 2);
    }

    #[test]
    fn escaped_metacharacters() {
        assert_eq!(
            parse_pattern(r"\.\*\(").unwrap(),
            Ast::Concat(vec![lit(b'.'), lit(b'*'), lit(b'(')])
        );
    }

    #[test]
    fn group_nodes() {
        let ast = parse_pattern("(ab|c)d").unwrap();
        let Ast::Concat(items) = ast else {
            panic!("expected concat")
        };
        assert!(matches!(items[0], Ast::Group(_)));
        assert_eq!(items[1], lit(b'd'));
    }
}
