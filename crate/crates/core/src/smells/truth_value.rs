use rustpython_ast::{self as ast, Ranged};

use super::util::{bool_literal, int_literal};
use super::Finding;
use crate::syntax::walk::{stmt_blocks, visit_stmts_exprs};
use crate::syntax::{fragment, Prec, SourceUnit};

pub(crate) fn find(unit: &SourceUnit, allowlist: &[String]) -> Vec<Finding> {
    let mut conditions: Vec<&ast::Expr> = Vec::new();
    collect_stmt_conditions(unit.suite(), &mut conditions);
    visit_stmts_exprs(unit.suite(), &mut |expr| {
        match expr {
            ast::Expr::IfExp(e) => conditions.push(&e.test),
            ast::Expr::ListComp(_) | ast::Expr::SetComp(_) | ast::Expr::DictComp(_) | ast::Expr::GeneratorExp(_) => {
                for g in generators(expr) {
                    conditions.extend(g.ifs.iter());
                }
            }
            _ => {}
        }
        true
    });

    let mut out = Vec::new();
    for cond in conditions {
        visit_condition(unit, cond, allowlist, &mut out);
    }
    out
}

fn generators(expr: &ast::Expr) -> &[ast::Comprehension] {
    match expr {
        ast::Expr::ListComp(c) => &c.generators,
        ast::Expr::SetComp(c) => &c.generators,
        ast::Expr::DictComp(c) => &c.generators,
        ast::Expr::GeneratorExp(c) => &c.generators,
        _ => &[],
    }
}

fn collect_stmt_conditions<'a>(stmts: &'a [ast::Stmt], out: &mut Vec<&'a ast::Expr>) {
    for stmt in stmts {
        match stmt {
            ast::Stmt::If(s) => out.push(&s.test),
            ast::Stmt::While(s) => out.push(&s.test),
            ast::Stmt::Assert(s) => out.push(&s.test),
            _ => {}
        }
        for block in stmt_blocks(stmt) {
            collect_stmt_conditions(block, out);
        }
    }
}

/// Walks an expression whose truth value is all that matters.
fn visit_condition(unit: &SourceUnit, expr: &ast::Expr, allowlist: &[String], out: &mut Vec<Finding>) {
    match expr {
        ast::Expr::BoolOp(b) => {
            for v in &b.values {
                visit_condition(unit, v, allowlist, out);
            }
        }
        ast::Expr::UnaryOp(u) if u.op == ast::UnaryOp::Not => visit_condition(unit, &u.operand, allowlist, out),
        ast::Expr::Compare(_) => {
            if let Some(simple) = rewrite(unit, expr, allowlist) {
                out.push(Finding::new(expr.range(), simple));
            }
        }
        _ => {}
    }
}

fn rewrite(unit: &SourceUnit, expr: &ast::Expr, allowlist: &[String]) -> Option<String> {
    let ast::Expr::Compare(c) = expr else { return None };
    let ([op], [right]) = (c.ops.as_slice(), c.comparators.as_slice()) else { return None };
    let left = &*c.left;
    match op {
        ast::CmpOp::Eq | ast::CmpOp::NotEq => {
            let value = int_literal(right).filter(|_| bool_literal(right).is_none())?;
            match (op, value) {
                (ast::CmpOp::Eq, 0) => Some(format!("not {}", fragment(unit, left, Prec::Not))),
                (ast::CmpOp::NotEq, 0) => Some(fragment(unit, left, Prec::Not)),
                (ast::CmpOp::Eq, 1) if is_mod_two(left) => Some(fragment(unit, left, Prec::Not)),
                _ => None,
            }
        }
        ast::CmpOp::Is | ast::CmpOp::IsNot => {
            let truth = bool_literal(right)?;
            if !is_allowed_call(left, allowlist) {
                return None;
            }
            let positive = truth == (*op == ast::CmpOp::Is);
            let text = fragment(unit, left, Prec::Not);
            Some(if positive { text } else { format!("not {text}") })
        }
        _ => None,
    }
}

fn is_mod_two(expr: &ast::Expr) -> bool {
    matches!(expr, ast::Expr::BinOp(b) if b.op == ast::Operator::Mod && int_literal(&b.right) == Some(2))
}

fn is_allowed_call(expr: &ast::Expr, allowlist: &[String]) -> bool {
    let ast::Expr::Call(call) = expr else { return false };
    matches!(&*call.func, ast::Expr::Name(n) if allowlist.iter().any(|a| a == n.id.as_str()))
}
