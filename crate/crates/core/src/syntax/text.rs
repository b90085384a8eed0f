use rustpython_ast::{self as ast, Ranged};
use rustpython_parser::{lexer::lex, Mode, Tok};

use super::SourceUnit;

/// Binding strength of an expression, lowest first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub(crate) enum Prec {
    Yield,
    Tuple,
    Named,
    Lambda,
    IfExp,
    Or,
    And,
    Not,
    Compare,
    BitOr,
    BitXor,
    BitAnd,
    Shift,
    Arith,
    Term,
    Factor,
    Power,
    Await,
    Atom,
}

pub(crate) fn prec_of(unit: &SourceUnit, expr: &ast::Expr) -> Prec {
    use ast::Expr::*;
    match expr {
        Tuple(_) | GeneratorExp(_) | Starred(_) => {
            if is_wrapped(unit.slice(expr.range())) {
                Prec::Atom
            } else {
                Prec::Tuple
            }
        }
        Yield(_) | YieldFrom(_) => Prec::Yield,
        NamedExpr(_) => Prec::Named,
        Lambda(_) => Prec::Lambda,
        IfExp(_) => Prec::IfExp,
        BoolOp(b) => match b.op {
            ast::BoolOp::Or => Prec::Or,
            ast::BoolOp::And => Prec::And,
        },
        UnaryOp(u) => match u.op {
            ast::UnaryOp::Not => Prec::Not,
            _ => Prec::Factor,
        },
        Compare(_) => Prec::Compare,
        BinOp(b) => match b.op {
            ast::Operator::BitOr => Prec::BitOr,
            ast::Operator::BitXor => Prec::BitXor,
            ast::Operator::BitAnd => Prec::BitAnd,
            ast::Operator::LShift | ast::Operator::RShift => Prec::Shift,
            ast::Operator::Add | ast::Operator::Sub => Prec::Arith,
            ast::Operator::Pow => Prec::Power,
            _ => Prec::Term,
        },
        Await(_) => Prec::Await,
        _ => Prec::Atom,
    }
}

/// Source text of `expr`, parenthesized when it binds more loosely than
/// the insertion context requires.
pub(crate) fn fragment(unit: &SourceUnit, expr: &ast::Expr, min: Prec) -> String {
    let text = unit.slice(expr.range());
    if prec_of(unit, expr) >= min {
        text.to_string()
    } else {
        format!("({text})")
    }
}

/// True when the whole of `src` is one parenthesized group.
pub(crate) fn is_wrapped(src: &str) -> bool {
    let mut depth = 0usize;
    let mut tokens = lex(src, Mode::Expression)
        .filter_map(Result::ok)
        .map(|(tok, _)| tok)
        .filter(|tok| !matches!(tok, Tok::Newline | Tok::StartExpression | Tok::EndOfFile));
    if !matches!(tokens.next(), Some(Tok::Lpar)) {
        return false;
    }
    depth += 1;
    while let Some(tok) = tokens.next() {
        match tok {
            Tok::Lpar | Tok::Lsqb | Tok::Lbrace => depth += 1,
            Tok::Rpar | Tok::Rsqb | Tok::Rbrace => {
                depth -= 1;
                if depth == 0 {
                    return tokens.next().is_none();
                }
            }
            _ => {}
        }
    }
    false
}

/// Counts the closing parentheses between `from` and the next non-paren,
/// non-whitespace character.
pub(crate) fn closing_parens_after(text: &str, from: usize) -> usize {
    let mut n = 0;
    for c in text[from..].chars() {
        match c {
            ')' => n += 1,
            c if c.is_whitespace() || c == '\\' => {}
            _ => break,
        }
    }
    n
}

/// Counts the opening parentheses directly before `to`.
pub(crate) fn opening_parens_before(text: &str, to: usize) -> usize {
    let mut n = 0;
    for c in text[..to].chars().rev() {
        match c {
            '(' => n += 1,
            c if c.is_whitespace() || c == '\\' => {}
            _ => break,
        }
    }
    n
}

/// Moves `start` left past `count` opening parentheses.
pub(crate) fn extend_left(text: &str, start: usize, count: usize) -> usize {
    let mut pos = start;
    let mut seen = 0;
    for (i, c) in text[..start].char_indices().rev() {
        if seen == count {
            break;
        }
        if c == '(' {
            seen += 1;
            pos = i;
        }
    }
    pos
}

/// Moves `end` right past `count` closing parentheses.
pub(crate) fn extend_right(text: &str, end: usize, count: usize) -> usize {
    let mut pos = end;
    let mut seen = 0;
    for (i, c) in text[end..].char_indices() {
        if seen == count {
            break;
        }
        if c == ')' {
            seen += 1;
            pos = end + i + 1;
        }
    }
    pos
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wrapped_groups() {
        assert!(is_wrapped("(a, b)"));
        assert!(is_wrapped("( (a), b )"));
        assert!(!is_wrapped("(a), (b)"));
        assert!(!is_wrapped("a, b"));
        assert!(!is_wrapped("(a) + b"));
        assert!(is_wrapped("(x for x in y)"));
        assert!(!is_wrapped("x for x in y"));
        assert!(is_wrapped("(')(')"));
    }

    #[test]
    fn paren_counting() {
        let t = "((a < b)) and (b < c)";
        assert_eq!(closing_parens_after(t, 7), 2);
        assert_eq!(opening_parens_before(t, 15), 1);
        assert_eq!(extend_left(t, 2, 2), 0);
        assert_eq!(extend_right(t, 20, 1), 21);
    }

    #[test]
    fn fragments_add_parens_only_when_needed() {
        let unit = crate::syntax::parse_unit("f.py", "x = a if b else c\ny = a + b\nz = 1, 2\n").unwrap();
        let value = |i: usize| match &unit.suite()[i] {
            ast::Stmt::Assign(a) => (*a.value).clone(),
            _ => unreachable!(),
        };
        assert_eq!(fragment(&unit, &value(0), Prec::Or), "(a if b else c)");
        assert_eq!(fragment(&unit, &value(0), Prec::Lambda), "a if b else c");
        assert_eq!(fragment(&unit, &value(1), Prec::Compare), "a + b");
        assert_eq!(fragment(&unit, &value(2), Prec::Lambda), "(1, 2)");
    }
}
