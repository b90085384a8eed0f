use rustpython_ast::{self as ast, Ranged};

use super::util::int_literal;
use super::Finding;
use crate::syntax::walk::{visit_expr, visit_stmts_exprs};
use crate::syntax::{fragment, is_pure, structural_equal, Prec, SourceUnit};

pub(crate) fn find(unit: &SourceUnit, min_run: usize) -> Vec<Finding> {
    let mut out = Vec::new();
    visit_stmts_exprs(unit.suite(), &mut |expr| {
        if !matches!(expr, ast::Expr::Call(_)) {
            return true;
        }
        let mut edits = Vec::new();
        visit_expr(expr, &mut |e| {
            if let ast::Expr::Call(call) = e {
                edits.extend(runs(unit, &call.args, min_run));
            }
            true
        });
        if edits.is_empty() {
            return true;
        }
        // report the outermost call once, with every run inside it rewritten
        edits.sort_by_key(|e| e.0);
        let range = expr.range();
        let mut pos: usize = range.start().into();
        let mut simple = String::new();
        for (start, end, text) in edits {
            simple.push_str(&unit.text()[pos..start]);
            simple.push_str(&text);
            pos = end;
        }
        simple.push_str(&unit.text()[pos..range.end().into()]);
        out.push(Finding::new(range, simple));
        false
    });
    out
}

/// `S[c]` with a pure base and a non-negative integer index.
fn indexed(arg: &ast::Expr) -> Option<(&ast::Expr, i64)> {
    let ast::Expr::Subscript(sub) = arg else { return None };
    let index = int_literal(&sub.slice).filter(|&i| i >= 0)?;
    is_pure(&sub.value).then_some((&*sub.value, index))
}

fn runs(unit: &SourceUnit, args: &[ast::Expr], min_run: usize) -> Vec<(usize, usize, String)> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < args.len() {
        let Some((base, first)) = indexed(&args[i]) else {
            i += 1;
            continue;
        };
        let mut j = i + 1;
        while let Some((b, idx)) = args.get(j).and_then(indexed) {
            if idx != first + (j - i) as i64 || !structural_equal(b, base) {
                break;
            }
            j += 1;
        }
        let len = j - i;
        if len >= min_run {
            let text = format!("*{}[{}:{}]", fragment(unit, base, Prec::Atom), first, first + len as i64);
            out.push((args[i].range().start().into(), args[j - 1].range().end().into(), text));
            i = j;
        } else {
            i += 1;
        }
    }
    out
}
