use std::collections::HashSet;

use rustpython_ast::{self as ast, Ranged};

use super::util::{int_literal, UseCache};
use super::Finding;
use crate::syntax::walk::{dead_after, for_each_block, name_uses, visit_stmts_exprs};
use crate::syntax::{SourceUnit, TextRange};

const PREFIXES: [&str; 4] = ["e", "elem", "item_e", "el"];

pub(crate) fn find(unit: &SourceUnit) -> Vec<Finding> {
    let mut out = Vec::new();
    let mut cache = UseCache::default();
    let taken: HashSet<String> = name_uses(unit.suite()).into_iter().map(|u| u.id).collect();
    for_each_block(unit.suite(), &mut |block, ctx| {
        for stmt in block {
            let ast::Stmt::For(for_stmt) = stmt else { continue };
            let Some((item, indices, max)) = match_loop(for_stmt) else { continue };
            let uses = cache.get(ctx.scope_body);
            if uses.iter().any(|u| u.id == item && u.nested) {
                continue;
            }
            if !dead_after(uses, item, for_stmt.range, &ctx.loops) {
                continue;
            }
            let Some(prefix) = PREFIXES.into_iter().find(|p| {
                !taken.contains(*p) && (0..=max).all(|k| !taken.contains(&format!("{p}_{k}")))
            }) else {
                continue;
            };
            out.push(Finding::new(for_stmt.range, render(unit, for_stmt, &indices, max, prefix)));
        }
    });
    out
}

type LoopMatch<'a> = (&'a str, Vec<(TextRange, i64)>, i64);

/// The loop variable, the `item[k]` subscripts that use it, and the
/// largest `k`.
fn match_loop(for_stmt: &ast::StmtFor) -> Option<LoopMatch<'_>> {
    let ast::Expr::Name(target) = &*for_stmt.target else { return None };
    if !for_stmt.orelse.is_empty() || for_stmt.type_comment.is_some() {
        return None;
    }
    let item = target.id.as_str();
    let mut indices = Vec::new();
    let mut bare = false;
    visit_stmts_exprs(&for_stmt.body, &mut |e| {
        match e {
            ast::Expr::Subscript(s) if matches!(&*s.value, ast::Expr::Name(n) if n.id.as_str() == item) => {
                match int_literal(&s.slice).filter(|&k| k >= 0) {
                    Some(k) if matches!(s.ctx, ast::ExprContext::Load) => indices.push((s.range, k)),
                    _ => bare = true,
                }
                false
            }
            ast::Expr::Name(n) if n.id.as_str() == item => {
                bare = true;
                false
            }
            _ => true,
        }
    });
    // rebinding through def/class/import/except names also disqualifies
    if bare || indices.is_empty() || !only_subscripts(&for_stmt.body, item, indices.len()) {
        return None;
    }
    let max = indices.iter().map(|&(_, k)| k).max()?;
    Some((item, indices, max))
}

fn only_subscripts(body: &[ast::Stmt], item: &str, expected: usize) -> bool {
    let uses: Vec<_> = name_uses(body).into_iter().filter(|u| u.id == item).collect();
    uses.len() == expected && uses.iter().all(|u| !u.store && !u.nested)
}

fn render(unit: &SourceUnit, for_stmt: &ast::StmtFor, indices: &[(TextRange, i64)], max: i64, prefix: &str) -> String {
    let text = unit.text();
    let start: usize = for_stmt.range.start().into();
    let target = for_stmt.target.range();
    let mut out = String::new();
    out.push_str(&text[start..target.start().into()]);
    let names: Vec<String> = (0..=max).map(|k| format!("{prefix}_{k}")).collect();
    out.push_str(&format!("{}, *{prefix}", names.join(", ")));

    let iter_end: usize = for_stmt.iter.range().end().into();
    let colon = iter_end + text[iter_end..].find(':').unwrap_or(0);
    out.push_str(&text[target.end().into()..=colon]);
    let body_start: usize = for_stmt.body[0].range().start().into();
    let between = &text[colon + 1..body_start];
    if between.contains('\n') {
        out.push_str(between);
    } else {
        out.push('\n');
        out.push_str(unit.indent_at(start));
        out.push_str("    ");
    }

    let mut edits: Vec<(usize, usize, String)> = indices
        .iter()
        .map(|&(r, k)| (r.start().into(), r.end().into(), format!("{prefix}_{k}")))
        .collect();
    edits.sort();
    let mut pos = body_start;
    for (a, b, name) in edits {
        out.push_str(&text[pos..a]);
        out.push_str(&name);
        pos = b;
    }
    out.push_str(&text[pos..for_stmt.range.end().into()]);
    out
}
