use rustpython_ast::{self as ast, Ranged};

use super::util::{bool_literal, UseCache};
use super::Finding;
use crate::syntax::walk::{for_each_block, stmt_blocks};
use crate::syntax::{SourceUnit, TextRange};

pub(crate) fn find(unit: &SourceUnit) -> Vec<Finding> {
    let mut out = Vec::new();
    let mut cache = UseCache::default();
    for_each_block(unit.suite(), &mut |block, ctx| {
        if ctx.class_body {
            return;
        }
        for w in block.windows(3) {
            let Some(m) = match_triple(unit, &w[0], &w[1], &w[2]) else { continue };
            if !flag_is_private(cache.get(ctx.scope_body), &m) {
                continue;
            }
            let region = TextRange::new(w[0].range().start(), w[2].range().end());
            out.push(Finding::new(region, render(unit, &m)));
        }
    });
    out
}

struct Match<'a> {
    flag: &'a str,
    for_stmt: &'a ast::StmtFor,
    post: &'a ast::StmtIf,
    /// Flag assignments inside the loop, each directly followed by `break`.
    resets: Vec<&'a ast::Stmt>,
}

fn flag_assign(stmt: &ast::Stmt) -> Option<(&str, bool)> {
    let ast::Stmt::Assign(a) = stmt else { return None };
    let [ast::Expr::Name(n)] = a.targets.as_slice() else { return None };
    Some((n.id.as_str(), bool_literal(&a.value)?))
}

fn match_triple<'a>(
    unit: &SourceUnit,
    init: &'a ast::Stmt,
    looped: &'a ast::Stmt,
    after: &'a ast::Stmt,
) -> Option<Match<'a>> {
    let (flag, initial) = flag_assign(init)?;
    let ast::Stmt::For(for_stmt) = looped else { return None };
    let ast::Stmt::If(post) = after else { return None };
    if !for_stmt.orelse.is_empty() || !post.orelse.is_empty() {
        return None;
    }
    // the flag keeps its initial value only when the loop ran to completion
    let tests_completion = match &*post.test {
        ast::Expr::Name(n) => initial && n.id.as_str() == flag,
        ast::Expr::UnaryOp(u) if u.op == ast::UnaryOp::Not => {
            !initial && matches!(&*u.operand, ast::Expr::Name(n) if n.id.as_str() == flag)
        }
        _ => false,
    };
    if !tests_completion {
        return None;
    }
    // comments or blank-line structure between the three statements would be lost
    let gap = |a: &ast::Stmt, b: &ast::Stmt| {
        unit.slice(TextRange::new(a.range().end(), b.range().start())).trim().is_empty()
    };
    if !gap(init, looped) || !gap(looped, after) {
        return None;
    }
    let mut resets = Vec::new();
    let mut breaks = 0;
    if !scan_body(&for_stmt.body, flag, !initial, false, &mut resets, &mut breaks) || breaks == 0 {
        return None;
    }
    Some(Match { flag, for_stmt, post, resets })
}

/// Checks that every `break` of the loop is preceded by `flag = exit` and
/// every flag assignment is followed by `break`.
fn scan_body<'a>(
    block: &'a [ast::Stmt],
    flag: &str,
    exit: bool,
    in_inner_loop: bool,
    resets: &mut Vec<&'a ast::Stmt>,
    breaks: &mut usize,
) -> bool {
    for (i, stmt) in block.iter().enumerate() {
        match stmt {
            ast::Stmt::Break(_) if !in_inner_loop => {
                let ok = i > 0 && flag_assign(&block[i - 1]) == Some((flag, exit));
                if !ok {
                    return false;
                }
                *breaks += 1;
            }
            ast::Stmt::Assign(_) if flag_assign(stmt).is_some_and(|(f, _)| f == flag) => {
                if in_inner_loop || flag_assign(stmt) != Some((flag, exit)) {
                    return false;
                }
                if !matches!(block.get(i + 1), Some(ast::Stmt::Break(_))) {
                    return false;
                }
                resets.push(stmt);
            }
            ast::Stmt::FunctionDef(_) | ast::Stmt::AsyncFunctionDef(_) | ast::Stmt::ClassDef(_) => {}
            _ => {
                let inner = in_inner_loop
                    || matches!(stmt, ast::Stmt::For(_) | ast::Stmt::AsyncFor(_) | ast::Stmt::While(_));
                for (k, child) in stmt_blocks(stmt).into_iter().enumerate() {
                    // a loop's else clause belongs to the outer loop for `break`
                    let inner_here = if k == 1 && !in_inner_loop { false } else { inner };
                    if !scan_body(child, flag, exit, inner_here, resets, breaks) {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// The flag is only touched by the matched statements.
fn flag_is_private(uses: &[crate::syntax::walk::NameUse], m: &Match<'_>) -> bool {
    let mine: Vec<_> = uses.iter().filter(|u| u.id == m.flag).collect();
    if mine.iter().any(|u| u.nested) {
        return false;
    }
    let loads = mine.iter().filter(|u| !u.store).count();
    let stores = mine.iter().filter(|u| u.store).count();
    let test = m.post.test.range();
    let load_in_test = mine
        .iter()
        .filter(|u| !u.store)
        .all(|u| test.contains(crate::syntax::TextSize::from(u.offset as u32)));
    loads == 1 && load_in_test && stores == 1 + m.resets.len()
}

fn render(unit: &SourceUnit, m: &Match<'_>) -> String {
    let text = unit.text();
    let for_start: usize = m.for_stmt.range.start().into();
    let for_end: usize = m.for_stmt.range.end().into();

    let mut cuts: Vec<(usize, usize)> = m.resets.iter().map(|s| removal(text, s)).collect();
    cuts.sort();
    let mut body = String::new();
    let mut pos = for_start;
    for (a, b) in cuts {
        body.push_str(&text[pos..a]);
        pos = b;
    }
    body.push_str(&text[pos..for_end]);

    let test_end: usize = m.post.test.range().end().into();
    let post_end: usize = m.post.range.end().into();
    let colon = test_end + text[test_end..].find(':').unwrap_or(0);
    let indent = unit.indent_at(for_start);
    format!("{body}\n{indent}else{}", &text[colon..post_end])
}

/// Byte span to delete for a flag assignment: its whole line when it
/// stands alone, otherwise the statement and its `;` separator.
fn removal(text: &str, stmt: &ast::Stmt) -> (usize, usize) {
    let start: usize = stmt.range().start().into();
    let end: usize = stmt.range().end().into();
    let line_start = text[..start].rfind('\n').map_or(0, |i| i + 1);
    let rest = &text[end..];
    let trimmed = rest.trim_start_matches([' ', '\t']);
    if let Some(after_semi) = trimmed.strip_prefix(';') {
        let skip = after_semi.len() - after_semi.trim_start_matches([' ', '\t']).len();
        let next = text.len() - after_semi.len() + skip;
        return (start, next);
    }
    if text[line_start..start].trim().is_empty() {
        let line_end = text[end..].find('\n').map_or(text.len(), |i| end + i + 1);
        return (line_start, line_end);
    }
    (start, end)
}
