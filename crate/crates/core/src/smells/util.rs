use std::collections::HashMap;

use rustpython_ast as ast;

use crate::syntax::walk::{self, NameUse};

/// Identifiers loaded or stored anywhere inside `expr`.
pub(crate) fn mentions(expr: &ast::Expr, id: &str) -> bool {
    let mut found = false;
    walk::visit_expr(expr, &mut |e| {
        if let ast::Expr::Name(n) = e {
            found |= n.id.as_str() == id;
        }
        !found
    });
    found
}

pub(crate) fn contains(expr: &ast::Expr, pred: &dyn Fn(&ast::Expr) -> bool) -> bool {
    let mut found = false;
    walk::visit_expr(expr, &mut |e| {
        found |= pred(e);
        !found
    });
    found
}

/// Walrus, yield and await change meaning when moved into a new scope.
pub(crate) fn scope_sensitive(expr: &ast::Expr) -> bool {
    contains(expr, &|e| {
        matches!(
            e,
            ast::Expr::NamedExpr(_) | ast::Expr::Yield(_) | ast::Expr::YieldFrom(_) | ast::Expr::Await(_)
        )
    })
}

/// The name at the bottom of an attribute/subscript chain.
pub(crate) fn root_name(expr: &ast::Expr) -> Option<&str> {
    match expr {
        ast::Expr::Name(n) => Some(n.id.as_str()),
        ast::Expr::Attribute(a) => root_name(&a.value),
        ast::Expr::Subscript(s) => root_name(&s.value),
        _ => None,
    }
}

/// Names bound by an assignment target made only of names.
pub(crate) fn target_names(target: &ast::Expr) -> Option<Vec<&str>> {
    match target {
        ast::Expr::Name(n) => Some(vec![n.id.as_str()]),
        ast::Expr::Starred(s) => target_names(&s.value),
        ast::Expr::Tuple(t) => collect_names(&t.elts),
        ast::Expr::List(l) => collect_names(&l.elts),
        _ => None,
    }
}

fn collect_names(elts: &[ast::Expr]) -> Option<Vec<&str>> {
    let mut out = Vec::new();
    for e in elts {
        out.extend(target_names(e)?);
    }
    Some(out)
}

pub(crate) fn int_literal(expr: &ast::Expr) -> Option<i64> {
    match expr {
        ast::Expr::Constant(c) => match &c.value {
            ast::Constant::Int(i) => i.to_string().parse().ok(),
            _ => None,
        },
        _ => None,
    }
}

pub(crate) fn bool_literal(expr: &ast::Expr) -> Option<bool> {
    match expr {
        ast::Expr::Constant(ast::ExprConstant { value: ast::Constant::Bool(b), .. }) => Some(*b),
        _ => None,
    }
}

/// Name uses per function scope, computed on demand.
#[derive(Default)]
pub(crate) struct UseCache {
    by_scope: HashMap<*const ast::Stmt, Vec<NameUse>>,
}

impl UseCache {
    pub fn get(&mut self, scope_body: &[ast::Stmt]) -> &[NameUse] {
        self.by_scope
            .entry(scope_body.as_ptr())
            .or_insert_with(|| walk::name_uses(scope_body))
    }
}
