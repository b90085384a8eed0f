use rustpython_ast::{self as ast, Ranged};

use super::util::{contains, mentions, root_name, scope_sensitive, UseCache};
use super::Finding;
use crate::syntax::walk::{dead_after, for_each_block};
use crate::syntax::{count_calls, fragment, is_pure, structural_equal, Prec, SourceUnit, TextRange};

pub(crate) fn find(unit: &SourceUnit) -> Vec<Finding> {
    let mut out = Vec::new();
    let mut cache = UseCache::default();
    for_each_block(unit.suite(), &mut |block, ctx| {
        let mut i = 0;
        while i < block.len() {
            if let Some(simple) = swap(unit, &block[i..]) {
                let region = TextRange::new(block[i].range().start(), block[i + 2].range().end());
                let ast::Stmt::Assign(a) = &block[i] else { unreachable!() };
                let ast::Expr::Name(temp) = &a.targets[0] else { unreachable!() };
                if dead_after(cache.get(ctx.scope_body), temp.id.as_str(), region, &ctx.loops) {
                    out.push(Finding::new(region, simple));
                    i += 3;
                    continue;
                }
            }
            let len = run_length(unit, &block[i..]);
            if len >= 2 {
                let run = &block[i..i + len];
                let region = TextRange::new(run[0].range().start(), run[len - 1].range().end());
                out.push(Finding::new(region, render_run(unit, run)));
                i += len;
            } else {
                i += 1;
            }
        }
    });
    out
}

fn single_assign(stmt: &ast::Stmt) -> Option<(&ast::Expr, &ast::Expr)> {
    let ast::Stmt::Assign(a) = stmt else { return None };
    match a.targets.as_slice() {
        [target] if a.type_comment.is_none() => Some((target, &a.value)),
        _ => None,
    }
}

fn simple_target(target: &ast::Expr) -> bool {
    match target {
        ast::Expr::Name(_) => true,
        ast::Expr::Attribute(_) | ast::Expr::Subscript(_) => is_pure(target),
        _ => false,
    }
}

/// `t = X; X = Y; Y = t` rewritten as `X, Y = Y, X`.
fn swap(unit: &SourceUnit, stmts: &[ast::Stmt]) -> Option<String> {
    let [a, b, c, ..] = stmts else { return None };
    let (temp, x) = single_assign(a)?;
    let (x2, y) = single_assign(b)?;
    let (y2, back) = single_assign(c)?;
    let ast::Expr::Name(t) = temp else { return None };
    let ast::Expr::Name(back) = back else { return None };
    if back.id != t.id || !simple_target(x) || !simple_target(y) {
        return None;
    }
    if !structural_equal(x, x2) || !structural_equal(y, y2) || structural_equal(x, y) {
        return None;
    }
    if mentions(x, t.id.as_str()) || mentions(y, t.id.as_str()) || !gaps_clean(unit, &stmts[..3]) {
        return None;
    }
    Some(format!(
        "{}, {} = {}, {}",
        unit.slice(x2.range()),
        unit.slice(y2.range()),
        unit.slice(y.range()),
        unit.slice(x.range())
    ))
}

fn gaps_clean(unit: &SourceUnit, stmts: &[ast::Stmt]) -> bool {
    stmts.windows(2).all(|w| {
        let gap = unit.slice(TextRange::new(w[0].range().end(), w[1].range().start()));
        gap.chars().all(|c| c.is_whitespace() || c == ';')
    })
}

/// Whether `value` may observe the assignment to `target`.
fn reads_target(value: &ast::Expr, target: &ast::Expr) -> bool {
    match target {
        ast::Expr::Name(n) => mentions(value, n.id.as_str()),
        _ => {
            let Some(root) = root_name(target) else { return true };
            contains(value, &|e| {
                matches!(e, ast::Expr::Attribute(_) | ast::Expr::Subscript(_)) && root_name(e) == Some(root)
            })
        }
    }
}

/// Length of the longest mergeable run at the start of `stmts`.
fn run_length(unit: &SourceUnit, stmts: &[ast::Stmt]) -> usize {
    let mut taken: Vec<(&ast::Expr, &ast::Expr)> = Vec::new();
    for (k, stmt) in stmts.iter().enumerate() {
        let Some((target, value)) = single_assign(stmt) else { break };
        if !simple_target(target) || scope_sensitive(value) {
            break;
        }
        // a call may observe earlier assignments that now happen later
        if k > 0 && count_calls(value) > 0 {
            break;
        }
        if taken.iter().any(|(t, _)| structural_equal(t, target) || reads_target(value, t)) {
            break;
        }
        if k > 0 && !gaps_clean(unit, &stmts[k - 1..=k]) {
            break;
        }
        taken.push((target, value));
    }
    taken.len()
}

fn render_run(unit: &SourceUnit, run: &[ast::Stmt]) -> String {
    let (targets, values): (Vec<String>, Vec<String>) = run
        .iter()
        .filter_map(single_assign)
        .map(|(t, v)| (unit.slice(t.range()).to_string(), fragment(unit, v, Prec::Lambda)))
        .unzip();
    format!("{} = {}", targets.join(", "), values.join(", "))
}
