//! Parsed Python source with line/column addressing.
//!
//! Parsing is delegated to `rustpython-parser` (Python 3 grammar). This
//! module adds what the detectors need on top of the raw tree: a line
//! index for converting byte offsets into 1-based lines and 0-based byte
//! columns, enclosing class/function resolution, structural comparison of
//! expressions and the purity classification used to keep rewrites free of
//! duplicated or reordered side effects.

pub(crate) mod text;
pub(crate) mod walk;

use std::fmt;

use rustpython_ast::{self as ast, Ranged};
use rustpython_parser::Parse;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use rustpython_ast::text_size::{TextRange, TextSize};
pub(crate) use text::{fragment, Prec};

/// A half-open source region. Lines are 1-based, columns are 0-based UTF-8
/// byte offsets into the line, and the end position is exclusive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SourceRange {
    pub start_line: u32,
    pub start_col: u32,
    pub end_line: u32,
    pub end_col: u32,
}

impl SourceRange {
    pub fn new(start_line: u32, start_col: u32, end_line: u32, end_col: u32) -> Self {
        Self { start_line, start_col, end_line, end_col }
    }

    pub fn start(&self) -> (u32, u32) {
        (self.start_line, self.start_col)
    }

    pub fn end(&self) -> (u32, u32) {
        (self.end_line, self.end_col)
    }

    pub fn overlaps(&self, other: &SourceRange) -> bool {
        self.start() < other.end() && other.start() < self.end()
    }
}

impl fmt::Display for SourceRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}-{}:{}", self.start_line, self.start_col, self.end_line, self.end_col)
    }
}

/// Innermost enclosing class and function; empty strings when absent.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ScopeInfo {
    pub class_name: String,
    pub function_name: String,
}

impl ScopeInfo {
    pub fn new(class_name: impl Into<String>, function_name: impl Into<String>) -> Self {
        Self { class_name: class_name.into(), function_name: function_name.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{path}:{line}:{col}: {message}")]
pub struct ParseError {
    pub path: String,
    pub line: u32,
    pub col: u32,
    pub message: String,
}

/// One parsed source file. Immutable after construction.
#[derive(Debug, Clone)]
pub struct SourceUnit {
    path: String,
    text: String,
    suite: ast::Suite,
    line_offsets: Vec<usize>,
}

/// Parses `text` as a Python 3 module.
pub fn parse_unit(path: impl Into<String>, text: &str) -> Result<SourceUnit, ParseError> {
    let path = path.into();
    let text = text.strip_prefix('\u{feff}').unwrap_or(text).to_string();
    let line_offsets = line_offsets(&text);
    match ast::Suite::parse(&text, &path) {
        Ok(suite) => Ok(SourceUnit { path, text, suite, line_offsets }),
        Err(err) => {
            let offset = usize::from(err.offset).min(text.len());
            let (line, col) = position(&line_offsets, offset);
            Err(ParseError { path, line, col, message: err.error.to_string() })
        }
    }
}

fn line_offsets(text: &str) -> Vec<usize> {
    std::iter::once(0)
        .chain(text.match_indices('\n').map(|(i, _)| i + 1))
        .collect()
}

fn position(line_offsets: &[usize], offset: usize) -> (u32, u32) {
    let line = line_offsets.partition_point(|&start| start <= offset) - 1;
    (line as u32 + 1, (offset - line_offsets[line]) as u32)
}

impl SourceUnit {
    pub fn path(&self) -> &str {
        &self.path
    }

    pub fn text(&self) -> &str {
        &self.text
    }

    pub fn suite(&self) -> &[ast::Stmt] {
        &self.suite
    }

    pub fn line_offsets(&self) -> &[usize] {
        &self.line_offsets
    }

    pub fn line_count(&self) -> usize {
        self.line_offsets.len()
    }

    /// Text addressed by a byte range.
    pub fn slice(&self, range: TextRange) -> &str {
        &self.text[range.start().to_usize()..range.end().to_usize()]
    }

    pub fn source_range(&self, range: TextRange) -> SourceRange {
        let (start_line, start_col) = position(&self.line_offsets, range.start().to_usize());
        let (end_line, end_col) = position(&self.line_offsets, range.end().to_usize());
        SourceRange { start_line, start_col, end_line, end_col }
    }

    /// Byte offset of a (line, col) position, `None` when out of bounds.
    pub fn offset(&self, line: u32, col: u32) -> Option<usize> {
        let start = *self.line_offsets.get((line as usize).checked_sub(1)?)?;
        let offset = start + col as usize;
        (offset <= self.text.len()).then_some(offset)
    }

    pub fn text_range(&self, range: &SourceRange) -> Option<TextRange> {
        let start = self.offset(range.start_line, range.start_col)?;
        let end = self.offset(range.end_line, range.end_col)?;
        (start <= end).then(|| TextRange::new(TextSize::from(start as u32), TextSize::from(end as u32)))
    }

    /// Source lines covered by `range`; the first line starts at the range
    /// start, later lines keep their indentation.
    pub fn lines_of(&self, range: TextRange) -> Vec<String> {
        split_lines(self.slice(range))
    }

    /// Indentation (leading whitespace) of the line containing `offset`.
    pub fn indent_at(&self, offset: usize) -> &str {
        let (line, _) = position(&self.line_offsets, offset);
        let start = self.line_offsets[line as usize - 1];
        let rest = &self.text[start..];
        let width = rest.len() - rest.trim_start_matches([' ', '\t']).len();
        &rest[..width]
    }
}

pub(crate) fn split_lines(s: &str) -> Vec<String> {
    s.split('\n').map(|l| l.strip_suffix('\r').unwrap_or(l).to_string()).collect()
}

/// Innermost enclosing function and class of `range`.
pub fn enclosing_scope(unit: &SourceUnit, range: &SourceRange) -> ScopeInfo {
    match unit.text_range(range) {
        Some(r) => scope_at(unit.suite(), r),
        None => ScopeInfo::default(),
    }
}

pub(crate) fn scope_at(suite: &[ast::Stmt], target: TextRange) -> ScopeInfo {
    let mut scope = ScopeInfo::default();
    let mut block = suite;
    'descend: loop {
        for stmt in block {
            if !stmt.range().contains_range(target) {
                continue;
            }
            match stmt {
                ast::Stmt::FunctionDef(f) if f.body.iter().any(|s| s.range().contains_range(target)) => {
                    scope.function_name = f.name.to_string();
                }
                ast::Stmt::AsyncFunctionDef(f) if f.body.iter().any(|s| s.range().contains_range(target)) => {
                    scope.function_name = f.name.to_string();
                }
                ast::Stmt::ClassDef(c) if c.body.iter().any(|s| s.range().contains_range(target)) => {
                    scope.class_name = c.name.to_string();
                }
                _ => {}
            }
            for child in walk::stmt_blocks(stmt) {
                if child.iter().any(|s| s.range().contains_range(target)) {
                    block = child;
                    continue 'descend;
                }
            }
            break 'descend;
        }
        break;
    }
    scope
}

/// True iff the two expressions have the same syntax tree, ignoring
/// whitespace and redundant parentheses.
pub fn structural_equal(a: &ast::Expr, b: &ast::Expr) -> bool {
    a.to_string() == b.to_string()
}

/// Side-effect-free expressions: names, literals, attribute chains,
/// subscripts with pure indices, and operators over pure operands. Any call
/// (or construct that implies one, such as a comprehension) is impure.
pub fn is_pure(expr: &ast::Expr) -> bool {
    use ast::Expr::*;
    match expr {
        Name(_) | Constant(_) | Lambda(_) => true,
        Attribute(a) => is_pure(&a.value),
        Subscript(s) => is_pure(&s.value) && is_pure(&s.slice),
        Slice(s) => [&s.lower, &s.upper, &s.step].into_iter().flatten().all(|e| is_pure(e)),
        UnaryOp(u) => is_pure(&u.operand),
        BinOp(b) => is_pure(&b.left) && is_pure(&b.right),
        BoolOp(b) => b.values.iter().all(is_pure),
        Compare(c) => is_pure(&c.left) && c.comparators.iter().all(is_pure),
        IfExp(i) => is_pure(&i.test) && is_pure(&i.body) && is_pure(&i.orelse),
        Tuple(t) => t.elts.iter().all(is_pure),
        List(l) => l.elts.iter().all(is_pure),
        Set(s) => s.elts.iter().all(is_pure),
        Dict(d) => d.keys.iter().all(|k| k.as_ref().is_some_and(is_pure)) && d.values.iter().all(is_pure),
        JoinedStr(j) => j.values.iter().all(|v| matches!(v, Constant(_))),
        _ => false,
    }
}

/// Number of call nodes in an expression; used to check that rewrites keep
/// every call exactly once.
pub fn count_calls(expr: &ast::Expr) -> usize {
    let mut n = 0;
    walk::visit_expr(expr, &mut |e| {
        if matches!(e, ast::Expr::Call(_)) {
            n += 1;
        }
        true
    });
    n
}

#[cfg(test)]
mod tests {
    use super::*;
    use rustpython_parser::Parse;

    fn expr(src: &str) -> ast::Expr {
        ast::Expr::parse(src, "<test>").unwrap()
    }

    #[test]
    fn minimal_program_has_one_statement() {
        let unit = parse_unit("a.py", "x = 1\n").unwrap();
        assert_eq!(unit.suite().len(), 1);
        assert_eq!(unit.line_offsets(), &[0, 6]);
    }

    #[test]
    fn malformed_input_is_a_parse_error() {
        let err = parse_unit("b.py", "def f(:\n").unwrap_err();
        assert_eq!(err.path, "b.py");
        assert_eq!(err.line, 1);
    }

    #[test]
    fn python2_print_statement_is_rejected() {
        assert!(parse_unit("old.py", "print 'hello'\n").is_err());
    }

    #[test]
    fn ranges_use_one_based_lines_and_byte_columns() {
        let unit = parse_unit("r.py", "x = 1\nif  y == 0:\n    pass\n").unwrap();
        let ast::Stmt::If(stmt) = &unit.suite()[1] else { panic!() };
        let r = unit.source_range(stmt.test.range());
        assert_eq!(r, SourceRange::new(2, 4, 2, 10));
        assert_eq!(unit.slice(stmt.test.range()), "y == 0");
        assert_eq!(unit.text_range(&r), Some(stmt.test.range()));
    }

    #[test]
    fn scope_resolution() {
        let src = "x = 1\ndef train():\n    y = 2\nclass A:\n    def m(self):\n        return 3\n";
        let unit = parse_unit("s.py", src).unwrap();
        assert_eq!(enclosing_scope(&unit, &SourceRange::new(1, 0, 1, 5)), ScopeInfo::default());
        assert_eq!(enclosing_scope(&unit, &SourceRange::new(3, 4, 3, 9)), ScopeInfo::new("", "train"));
        assert_eq!(enclosing_scope(&unit, &SourceRange::new(6, 8, 6, 16)), ScopeInfo::new("A", "m"));
        // the def header itself belongs to the enclosing scope
        assert_eq!(enclosing_scope(&unit, &SourceRange::new(2, 0, 3, 9)), ScopeInfo::default());
    }

    #[test]
    fn nested_function_inside_method() {
        let src = "class A:\n    def m(self):\n        def inner():\n            return 1\n        return inner\n";
        let unit = parse_unit("n.py", src).unwrap();
        assert_eq!(enclosing_scope(&unit, &SourceRange::new(4, 12, 4, 20)), ScopeInfo::new("A", "inner"));
        assert_eq!(enclosing_scope(&unit, &SourceRange::new(5, 8, 5, 20)), ScopeInfo::new("A", "m"));
    }

    #[test]
    fn structural_equality() {
        assert!(structural_equal(&expr("n1 + n2"), &expr("n1+n2")));
        assert!(!structural_equal(&expr("n1 + n2"), &expr("n2 + n1")));
        assert!(structural_equal(&expr("(i)"), &expr("i")));
        assert!(structural_equal(&expr("a[(0)]"), &expr("a[0]")));
        assert!(!structural_equal(&expr("a[0]"), &expr("a[1]")));
    }

    #[test]
    fn purity_classification() {
        for pure in ["x", "1", "a.b.c", "d[e]", "d[e + 1]", "-x", "a * (b + 2)", "(1, x)", "'s'"] {
            assert!(is_pure(&expr(pure)), "{pure}");
        }
        for impure in ["f()", "a.b()", "d[f()]", "[x for x in y]", "f'{x}'", "(y := 1)", "-g(x)"] {
            assert!(!is_pure(&expr(impure)), "{impure}");
        }
    }

    #[test]
    fn call_counting() {
        assert_eq!(count_calls(&expr("f(g(x), h)")), 2);
        assert_eq!(count_calls(&expr("a + b")), 0);
    }

    #[test]
    fn bom_is_stripped() {
        let unit = parse_unit("bom.py", "\u{feff}x = 1\n").unwrap();
        assert_eq!(unit.text(), "x = 1\n");
    }
}
