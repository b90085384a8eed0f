//! Loops that only fill a freshly created list, set or dict.

use rustpython_ast::{self as ast, Ranged};

use super::util::{mentions, root_name, scope_sensitive, target_names, UseCache};
use super::Finding;
use crate::syntax::walk::{dead_after, for_each_block};
use crate::syntax::{fragment, is_pure, structural_equal, Prec, SourceUnit, TextRange};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Flavor {
    List,
    Set,
    Dict,
}

pub(crate) fn find(unit: &SourceUnit, flavor: Flavor) -> Vec<Finding> {
    let mut out = Vec::new();
    let mut cache = UseCache::default();
    for_each_block(unit.suite(), &mut |block, ctx| {
        // comprehensions in a class body cannot see class-level names
        if ctx.class_body {
            return;
        }
        for pair in block.windows(2) {
            let Some(m) = match_pair(flavor, &pair[0], &pair[1]) else { continue };
            let uses = cache.get(ctx.scope_body);
            if !m.loop_names.iter().all(|id| dead_after(uses, id, m.loop_range, &ctx.loops)) {
                continue;
            }
            let region = TextRange::new(pair[0].range().start(), pair[1].range().end());
            out.push(Finding::new(region, render(unit, flavor, &m)));
        }
    });
    out
}

struct Match<'a> {
    accumulator: &'a ast::Expr,
    target: &'a ast::Expr,
    iter: &'a ast::Expr,
    element: Element<'a>,
    filter: Option<&'a ast::Expr>,
    loop_names: Vec<&'a str>,
    loop_range: TextRange,
}

enum Element<'a> {
    Single(&'a ast::Expr),
    Pair(&'a ast::Expr, &'a ast::Expr),
}

fn is_empty_container(flavor: Flavor, value: &ast::Expr) -> bool {
    match (flavor, value) {
        (Flavor::List, ast::Expr::List(l)) => l.elts.is_empty(),
        (Flavor::Dict, ast::Expr::Dict(d)) => d.keys.is_empty(),
        (Flavor::Set, ast::Expr::Call(c)) => {
            c.args.is_empty()
                && c.keywords.is_empty()
                && matches!(&*c.func, ast::Expr::Name(n) if n.id.as_str() == "set")
        }
        _ => false,
    }
}

fn match_pair<'a>(flavor: Flavor, init: &'a ast::Stmt, next: &'a ast::Stmt) -> Option<Match<'a>> {
    let ast::Stmt::Assign(assign) = init else { return None };
    let [accumulator] = assign.targets.as_slice() else { return None };
    if !matches!(accumulator, ast::Expr::Name(_) | ast::Expr::Attribute(_)) || !is_pure(accumulator) {
        return None;
    }
    if !is_empty_container(flavor, &assign.value) {
        return None;
    }
    let ast::Stmt::For(for_stmt) = next else { return None };
    if !for_stmt.orelse.is_empty() {
        return None;
    }
    let loop_names = target_names(&for_stmt.target)?;
    let [body] = for_stmt.body.as_slice() else { return None };
    let (add, filter) = match body {
        ast::Stmt::If(if_stmt) if if_stmt.orelse.is_empty() => match if_stmt.body.as_slice() {
            [inner] => (inner, Some(&*if_stmt.test)),
            _ => return None,
        },
        other => (other, None),
    };
    let element = match_add(flavor, accumulator, add)?;

    let root = root_name(accumulator)?;
    let mut moved: Vec<&ast::Expr> = vec![&for_stmt.iter];
    moved.extend(filter);
    match &element {
        Element::Single(e) => moved.push(e),
        Element::Pair(k, v) => moved.extend([*k, *v]),
    }
    if moved.iter().any(|e| mentions(e, root)) {
        return None;
    }
    if moved[1..].iter().any(|e| scope_sensitive(e)) {
        return None;
    }
    Some(Match {
        accumulator,
        target: &for_stmt.target,
        iter: &for_stmt.iter,
        element,
        filter,
        loop_names,
        loop_range: for_stmt.range,
    })
}

fn match_add<'a>(flavor: Flavor, accumulator: &ast::Expr, stmt: &'a ast::Stmt) -> Option<Element<'a>> {
    match flavor {
        Flavor::List | Flavor::Set => {
            let method = if flavor == Flavor::List { "append" } else { "add" };
            let ast::Stmt::Expr(expr_stmt) = stmt else { return None };
            let ast::Expr::Call(call) = &*expr_stmt.value else { return None };
            let ast::Expr::Attribute(attr) = &*call.func else { return None };
            if attr.attr.as_str() != method || !structural_equal(&attr.value, accumulator) {
                return None;
            }
            match (call.args.as_slice(), call.keywords.is_empty()) {
                ([arg], true) if !matches!(arg, ast::Expr::Starred(_)) => Some(Element::Single(arg)),
                _ => None,
            }
        }
        Flavor::Dict => {
            let ast::Stmt::Assign(assign) = stmt else { return None };
            let [ast::Expr::Subscript(sub)] = assign.targets.as_slice() else { return None };
            if matches!(&*sub.slice, ast::Expr::Slice(_)) || !structural_equal(&sub.value, accumulator) {
                return None;
            }
            Some(Element::Pair(&sub.slice, &assign.value))
        }
    }
}

fn render(unit: &SourceUnit, flavor: Flavor, m: &Match<'_>) -> String {
    let target = unit.slice(m.target.range());
    let iter = fragment(unit, m.iter, Prec::Or);
    let mut clause = format!("for {target} in {iter}");
    if let Some(cond) = m.filter {
        clause.push_str(" if ");
        clause.push_str(&fragment(unit, cond, Prec::Or));
    }
    let body = match (&m.element, flavor) {
        (Element::Single(e), Flavor::List) => format!("[{} {clause}]", fragment(unit, e, Prec::Lambda)),
        (Element::Single(e), _) => format!("{{{} {clause}}}", fragment(unit, e, Prec::Lambda)),
        (Element::Pair(k, v), _) => format!(
            "{{{}: {} {clause}}}",
            fragment(unit, k, Prec::Or),
            fragment(unit, v, Prec::Lambda)
        ),
    };
    format!("{} = {body}", unit.slice(m.accumulator.range()))
}
