use rustpython_ast::{self as ast, Ranged};

use super::Finding;
use crate::syntax::text::{closing_parens_after, extend_left, extend_right, opening_parens_before};
use crate::syntax::walk::visit_stmts_exprs;
use crate::syntax::{fragment, is_pure, structural_equal, Prec, SourceUnit, TextRange};

pub(crate) fn find(unit: &SourceUnit) -> Vec<Finding> {
    let mut out = Vec::new();
    visit_stmts_exprs(unit.suite(), &mut |expr| {
        if let ast::Expr::BoolOp(b) = expr {
            if b.op == ast::BoolOp::And {
                find_in(unit, &b.values, &mut out);
            }
        }
        true
    });
    out
}

/// A single comparison `left op right` with an ordering operator.
#[derive(Clone, Copy)]
struct Link<'a> {
    left: &'a ast::Expr,
    op: ast::CmpOp,
    right: &'a ast::Expr,
}

impl<'a> Link<'a> {
    fn of(expr: &'a ast::Expr) -> Option<Self> {
        let ast::Expr::Compare(c) = expr else { return None };
        match (c.ops.as_slice(), c.comparators.as_slice()) {
            ([op], [right]) if ascending(*op).is_some() => Some(Link { left: &c.left, op: *op, right }),
            _ => None,
        }
    }

    fn flipped(self) -> Option<Self> {
        // swapping operands changes evaluation order
        if !is_pure(self.left) || !is_pure(self.right) {
            return None;
        }
        let op = match self.op {
            ast::CmpOp::Lt => ast::CmpOp::Gt,
            ast::CmpOp::LtE => ast::CmpOp::GtE,
            ast::CmpOp::Gt => ast::CmpOp::Lt,
            _ => ast::CmpOp::LtE,
        };
        Some(Link { left: self.right, op, right: self.left })
    }

    fn orientations(self) -> impl Iterator<Item = Link<'a>> {
        std::iter::once(self).chain(self.flipped())
    }
}

fn ascending(op: ast::CmpOp) -> Option<bool> {
    match op {
        ast::CmpOp::Lt | ast::CmpOp::LtE => Some(true),
        ast::CmpOp::Gt | ast::CmpOp::GtE => Some(false),
        _ => None,
    }
}

fn op_text(op: ast::CmpOp) -> &'static str {
    match op {
        ast::CmpOp::Lt => "<",
        ast::CmpOp::LtE => "<=",
        ast::CmpOp::Gt => ">",
        _ => ">=",
    }
}

fn joins(a: Link<'_>, b: Link<'_>) -> bool {
    ascending(a.op) == ascending(b.op) && is_pure(a.right) && structural_equal(a.right, b.left)
}

fn find_in(unit: &SourceUnit, values: &[ast::Expr], out: &mut Vec<Finding>) {
    let mut i = 0;
    while i + 1 < values.len() {
        let (Some(first), Some(second)) = (Link::of(&values[i]), Link::of(&values[i + 1])) else {
            i += 1;
            continue;
        };
        let start = first
            .orientations()
            .flat_map(|a| second.orientations().map(move |b| (a, b)))
            .find(|&(a, b)| joins(a, b));
        let Some((a, b)) = start else {
            i += 1;
            continue;
        };
        let mut chain = vec![a, b];
        let mut j = i + 2;
        while let Some(next) = values.get(j).and_then(Link::of) {
            let last = *chain.last().unwrap();
            match next.orientations().find(|&n| joins(last, n)) {
                Some(n) => chain.push(n),
                None => break,
            }
            j += 1;
        }
        out.push(Finding::new(span(unit, &values[i], &values[j - 1]), render(unit, &chain)));
        i = j;
    }
}

/// Source range from `first` to `last`, including any parentheses that
/// wrap either end so the replaced text stays balanced.
fn span(unit: &SourceUnit, first: &ast::Expr, last: &ast::Expr) -> TextRange {
    let text = unit.text();
    let start: usize = first.range().start().into();
    let end: usize = last.range().end().into();
    let left = closing_parens_after(text, first.range().end().into());
    let right = opening_parens_before(text, last.range().start().into());
    let start = extend_left(text, start, left);
    let end = extend_right(text, end, right);
    TextRange::new((start as u32).into(), (end as u32).into())
}

fn render(unit: &SourceUnit, chain: &[Link<'_>]) -> String {
    let mut s = fragment(unit, chain[0].left, Prec::BitOr);
    for link in chain {
        s.push(' ');
        s.push_str(op_text(link.op));
        s.push(' ');
        s.push_str(&fragment(unit, link.right, Prec::BitOr));
    }
    s
}
