//! Borrowing traversals over the syntax tree.

use rustpython_ast::{self as ast, Ranged};

use super::TextRange;

/// Pre-order walk; returning `false` from `f` skips the node's children.
pub(crate) fn visit_expr<'a>(expr: &'a ast::Expr, f: &mut dyn FnMut(&'a ast::Expr) -> bool) {
    if f(expr) {
        for child in child_exprs(expr) {
            visit_expr(child, f);
        }
    }
}

/// Visits every expression in `stmts`, including nested statement bodies.
pub(crate) fn visit_stmts_exprs<'a>(stmts: &'a [ast::Stmt], f: &mut dyn FnMut(&'a ast::Expr) -> bool) {
    for stmt in stmts {
        for e in stmt_exprs(stmt) {
            visit_expr(e, f);
        }
        for block in stmt_blocks(stmt) {
            visit_stmts_exprs(block, f);
        }
    }
}

fn comprehension_exprs<'a>(generators: &'a [ast::Comprehension], out: &mut Vec<&'a ast::Expr>) {
    for g in generators {
        out.push(&g.iter);
        out.push(&g.target);
        out.extend(g.ifs.iter());
    }
}

fn arguments_exprs<'a>(args: &'a ast::Arguments, out: &mut Vec<&'a ast::Expr>) {
    let all = args.posonlyargs.iter().chain(&args.args).chain(&args.kwonlyargs);
    for a in all.clone() {
        out.extend(a.default.as_deref());
    }
    for a in all {
        out.extend(a.def.annotation.as_deref());
    }
    for a in [&args.vararg, &args.kwarg].into_iter().flatten() {
        out.extend(a.annotation.as_deref());
    }
}

/// Direct sub-expressions in evaluation order. Comprehension generators
/// come before the element so that loop targets precede their uses.
pub(crate) fn child_exprs(expr: &ast::Expr) -> Vec<&ast::Expr> {
    use ast::Expr::*;
    let mut out = Vec::new();
    match expr {
        BoolOp(e) => out.extend(e.values.iter()),
        NamedExpr(e) => {
            out.push(&*e.value);
            out.push(&*e.target);
        }
        BinOp(e) => {
            out.push(&*e.left);
            out.push(&*e.right);
        }
        UnaryOp(e) => out.push(&*e.operand),
        Lambda(e) => {
            arguments_exprs(&e.args, &mut out);
            out.push(&*e.body);
        }
        IfExp(e) => {
            out.push(&*e.test);
            out.push(&*e.body);
            out.push(&*e.orelse);
        }
        Dict(e) => {
            for (k, v) in e.keys.iter().zip(&e.values) {
                out.extend(k.as_ref());
                out.push(v);
            }
        }
        Set(e) => out.extend(e.elts.iter()),
        ListComp(e) => {
            comprehension_exprs(&e.generators, &mut out);
            out.push(&*e.elt);
        }
        SetComp(e) => {
            comprehension_exprs(&e.generators, &mut out);
            out.push(&*e.elt);
        }
        GeneratorExp(e) => {
            comprehension_exprs(&e.generators, &mut out);
            out.push(&*e.elt);
        }
        DictComp(e) => {
            comprehension_exprs(&e.generators, &mut out);
            out.push(&*e.key);
            out.push(&*e.value);
        }
        Await(e) => out.push(&*e.value),
        Yield(e) => out.extend(e.value.as_deref()),
        YieldFrom(e) => out.push(&*e.value),
        Compare(e) => {
            out.push(&*e.left);
            out.extend(e.comparators.iter());
        }
        Call(e) => {
            out.push(&*e.func);
            out.extend(e.args.iter());
            out.extend(e.keywords.iter().map(|k| &k.value));
        }
        FormattedValue(e) => {
            out.push(&*e.value);
            out.extend(e.format_spec.as_deref());
        }
        JoinedStr(e) => out.extend(e.values.iter()),
        Constant(_) | Name(_) => {}
        Attribute(e) => out.push(&*e.value),
        Subscript(e) => {
            out.push(&*e.value);
            out.push(&*e.slice);
        }
        Starred(e) => out.push(&*e.value),
        List(e) => out.extend(e.elts.iter()),
        Tuple(e) => out.extend(e.elts.iter()),
        Slice(e) => {
            out.extend(e.lower.as_deref());
            out.extend(e.upper.as_deref());
            out.extend(e.step.as_deref());
        }
    }
    out
}

fn pattern_exprs<'a>(pattern: &'a ast::Pattern, out: &mut Vec<&'a ast::Expr>) {
    use ast::Pattern::*;
    match pattern {
        MatchValue(p) => out.push(&p.value),
        MatchSingleton(_) | MatchStar(_) => {}
        MatchSequence(p) => p.patterns.iter().for_each(|p| pattern_exprs(p, out)),
        MatchMapping(p) => {
            out.extend(p.keys.iter());
            p.patterns.iter().for_each(|p| pattern_exprs(p, out));
        }
        MatchClass(p) => {
            out.push(&p.cls);
            p.patterns.iter().chain(&p.kwd_patterns).for_each(|p| pattern_exprs(p, out));
        }
        MatchAs(p) => {
            if let Some(p) = &p.pattern {
                pattern_exprs(p, out);
            }
        }
        MatchOr(p) => p.patterns.iter().for_each(|p| pattern_exprs(p, out)),
    }
}

/// Expressions that belong to the statement itself (not to nested bodies),
/// in evaluation order.
pub(crate) fn stmt_exprs(stmt: &ast::Stmt) -> Vec<&ast::Expr> {
    use ast::Stmt::*;
    let mut out = Vec::new();
    match stmt {
        FunctionDef(s) => {
            out.extend(s.decorator_list.iter());
            arguments_exprs(&s.args, &mut out);
            out.extend(s.returns.as_deref());
        }
        AsyncFunctionDef(s) => {
            out.extend(s.decorator_list.iter());
            arguments_exprs(&s.args, &mut out);
            out.extend(s.returns.as_deref());
        }
        ClassDef(s) => {
            out.extend(s.decorator_list.iter());
            out.extend(s.bases.iter());
            out.extend(s.keywords.iter().map(|k| &k.value));
        }
        Return(s) => out.extend(s.value.as_deref()),
        Delete(s) => out.extend(s.targets.iter()),
        Assign(s) => {
            out.push(&*s.value);
            out.extend(s.targets.iter());
        }
        TypeAlias(s) => {
            out.push(&*s.value);
            out.push(&*s.name);
        }
        AugAssign(s) => {
            out.push(&*s.value);
            out.push(&*s.target);
        }
        AnnAssign(s) => {
            out.extend(s.value.as_deref());
            out.push(&*s.annotation);
            out.push(&*s.target);
        }
        For(s) => {
            out.push(&*s.iter);
            out.push(&*s.target);
        }
        AsyncFor(s) => {
            out.push(&*s.iter);
            out.push(&*s.target);
        }
        While(s) => out.push(&*s.test),
        If(s) => out.push(&*s.test),
        With(s) => {
            for item in &s.items {
                out.push(&item.context_expr);
                out.extend(item.optional_vars.as_deref());
            }
        }
        AsyncWith(s) => {
            for item in &s.items {
                out.push(&item.context_expr);
                out.extend(item.optional_vars.as_deref());
            }
        }
        Match(s) => {
            out.push(&*s.subject);
            for case in &s.cases {
                pattern_exprs(&case.pattern, &mut out);
                out.extend(case.guard.as_deref());
            }
        }
        Raise(s) => {
            out.extend(s.exc.as_deref());
            out.extend(s.cause.as_deref());
        }
        Try(s) => {
            for ast::ExceptHandler::ExceptHandler(h) in &s.handlers {
                out.extend(h.type_.as_deref());
            }
        }
        TryStar(s) => {
            for ast::ExceptHandler::ExceptHandler(h) in &s.handlers {
                out.extend(h.type_.as_deref());
            }
        }
        Assert(s) => {
            out.push(&*s.test);
            out.extend(s.msg.as_deref());
        }
        Expr(s) => out.push(&*s.value),
        Import(_) | ImportFrom(_) | Global(_) | Nonlocal(_) | Pass(_) | Break(_) | Continue(_) => {}
    }
    out
}

/// Nested statement lists of a compound statement.
pub(crate) fn stmt_blocks(stmt: &ast::Stmt) -> Vec<&[ast::Stmt]> {
    use ast::Stmt::*;
    match stmt {
        FunctionDef(s) => vec![&s.body],
        AsyncFunctionDef(s) => vec![&s.body],
        ClassDef(s) => vec![&s.body],
        For(s) => vec![&s.body, &s.orelse],
        AsyncFor(s) => vec![&s.body, &s.orelse],
        While(s) => vec![&s.body, &s.orelse],
        If(s) => vec![&s.body, &s.orelse],
        With(s) => vec![&s.body],
        AsyncWith(s) => vec![&s.body],
        Match(s) => s.cases.iter().map(|c| c.body.as_slice()).collect(),
        Try(s) => {
            let mut v: Vec<&[ast::Stmt]> = vec![&s.body];
            v.extend(s.handlers.iter().map(|ast::ExceptHandler::ExceptHandler(h)| h.body.as_slice()));
            v.push(&s.orelse);
            v.push(&s.finalbody);
            v
        }
        TryStar(s) => {
            let mut v: Vec<&[ast::Stmt]> = vec![&s.body];
            v.extend(s.handlers.iter().map(|ast::ExceptHandler::ExceptHandler(h)| h.body.as_slice()));
            v.push(&s.orelse);
            v.push(&s.finalbody);
            v
        }
        _ => Vec::new(),
    }
}

/// Where a block of statements sits.
#[derive(Debug, Clone)]
pub(crate) struct BlockCtx<'a> {
    /// Body of the innermost enclosing function, or the module.
    pub scope_body: &'a [ast::Stmt],
    /// The block is the direct body of a class.
    pub class_body: bool,
    /// Loops of the current function scope that enclose this block,
    /// outermost first.
    pub loops: Vec<TextRange>,
}

/// Calls `f` on every statement list in the module with its context.
pub(crate) fn for_each_block<'a>(suite: &'a [ast::Stmt], f: &mut dyn FnMut(&'a [ast::Stmt], &BlockCtx<'a>)) {
    let ctx = BlockCtx { scope_body: suite, class_body: false, loops: Vec::new() };
    walk_block(suite, &ctx, f);
}

fn walk_block<'a>(block: &'a [ast::Stmt], ctx: &BlockCtx<'a>, f: &mut dyn FnMut(&'a [ast::Stmt], &BlockCtx<'a>)) {
    f(block, ctx);
    for stmt in block {
        match stmt {
            ast::Stmt::FunctionDef(s) => {
                let inner = BlockCtx { scope_body: &s.body, class_body: false, loops: Vec::new() };
                walk_block(&s.body, &inner, f);
            }
            ast::Stmt::AsyncFunctionDef(s) => {
                let inner = BlockCtx { scope_body: &s.body, class_body: false, loops: Vec::new() };
                walk_block(&s.body, &inner, f);
            }
            ast::Stmt::ClassDef(s) => {
                let inner = BlockCtx { scope_body: ctx.scope_body, class_body: true, loops: ctx.loops.clone() };
                walk_block(&s.body, &inner, f);
            }
            _ => {
                let is_loop = matches!(
                    stmt,
                    ast::Stmt::For(_) | ast::Stmt::AsyncFor(_) | ast::Stmt::While(_)
                );
                let mut inner = BlockCtx { scope_body: ctx.scope_body, class_body: false, loops: ctx.loops.clone() };
                if is_loop {
                    inner.loops.push(stmt.range());
                }
                for child in stmt_blocks(stmt) {
                    walk_block(child, &inner, f);
                }
            }
        }
    }
}

/// One occurrence of an identifier.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct NameUse {
    pub id: String,
    pub offset: usize,
    pub store: bool,
    /// Inside a nested function, lambda, class body or comprehension, or a
    /// global/nonlocal declaration.
    pub nested: bool,
}

/// Every identifier binding or use in `stmts`, nested scopes included, in
/// approximate execution order.
pub(crate) fn name_uses(stmts: &[ast::Stmt]) -> Vec<NameUse> {
    let mut out = Vec::new();
    collect_stmts(stmts, false, &mut out);
    out
}

fn push(out: &mut Vec<NameUse>, id: &str, offset: usize, store: bool, nested: bool) {
    out.push(NameUse { id: id.to_string(), offset, store, nested });
}

fn collect_expr(expr: &ast::Expr, nested: bool, out: &mut Vec<NameUse>) {
    let generators = match expr {
        ast::Expr::Name(n) => {
            let store = matches!(n.ctx, ast::ExprContext::Store);
            push(out, n.id.as_str(), n.range.start().to_usize(), store, nested);
            return;
        }
        ast::Expr::Lambda(l) => {
            let mut defaults = Vec::new();
            arguments_exprs(&l.args, &mut defaults);
            defaults.into_iter().for_each(|e| collect_expr(e, nested, out));
            collect_arguments(&l.args, l.range.start().to_usize(), true, out);
            collect_expr(&l.body, true, out);
            return;
        }
        ast::Expr::ListComp(c) => &c.generators,
        ast::Expr::SetComp(c) => &c.generators,
        ast::Expr::DictComp(c) => &c.generators,
        ast::Expr::GeneratorExp(c) => &c.generators,
        _ => {
            for child in child_exprs(expr) {
                collect_expr(child, nested, out);
            }
            return;
        }
    };
    // only the first iterable is evaluated in the enclosing scope
    for (i, child) in child_exprs(expr).into_iter().enumerate() {
        let outer = i == 0 && !generators.is_empty();
        collect_expr(child, nested || !outer, out);
    }
}

fn collect_pattern(pattern: &ast::Pattern, at: usize, nested: bool, out: &mut Vec<NameUse>) {
    use ast::Pattern::*;
    match pattern {
        MatchAs(p) => {
            if let Some(inner) = &p.pattern {
                collect_pattern(inner, at, nested, out);
            }
            if let Some(name) = &p.name {
                push(out, name.as_str(), at, true, nested);
            }
        }
        MatchStar(p) => {
            if let Some(name) = &p.name {
                push(out, name.as_str(), at, true, nested);
            }
        }
        MatchMapping(p) => {
            p.patterns.iter().for_each(|p| collect_pattern(p, at, nested, out));
            if let Some(rest) = &p.rest {
                push(out, rest.as_str(), at, true, nested);
            }
        }
        MatchSequence(p) => p.patterns.iter().for_each(|p| collect_pattern(p, at, nested, out)),
        MatchClass(p) => p
            .patterns
            .iter()
            .chain(&p.kwd_patterns)
            .for_each(|p| collect_pattern(p, at, nested, out)),
        MatchOr(p) => p.patterns.iter().for_each(|p| collect_pattern(p, at, nested, out)),
        MatchValue(_) | MatchSingleton(_) => {}
    }
}

fn collect_handlers(handlers: &[ast::ExceptHandler], nested: bool, out: &mut Vec<NameUse>) {
    for ast::ExceptHandler::ExceptHandler(h) in handlers {
        if let Some(name) = &h.name {
            push(out, name.as_str(), h.range.start().to_usize(), true, nested);
        }
    }
}

fn collect_stmts(stmts: &[ast::Stmt], nested: bool, out: &mut Vec<NameUse>) {
    for stmt in stmts {
        let at = stmt.range().start().to_usize();
        for e in stmt_exprs(stmt) {
            collect_expr(e, nested, out);
        }
        let mut inner = nested;
        match stmt {
            ast::Stmt::FunctionDef(s) => {
                push(out, s.name.as_str(), at, true, nested);
                collect_arguments(&s.args, at, true, out);
                inner = true;
            }
            ast::Stmt::AsyncFunctionDef(s) => {
                push(out, s.name.as_str(), at, true, nested);
                collect_arguments(&s.args, at, true, out);
                inner = true;
            }
            ast::Stmt::ClassDef(s) => {
                push(out, s.name.as_str(), at, true, nested);
                inner = true;
            }
            ast::Stmt::Import(s) => {
                for alias in &s.names {
                    let bound = alias.asname.as_ref().map(|a| a.as_str()).unwrap_or_else(|| {
                        alias.name.as_str().split('.').next().unwrap_or_default()
                    });
                    push(out, bound, at, true, nested);
                }
            }
            ast::Stmt::ImportFrom(s) => {
                for alias in &s.names {
                    let bound = alias.asname.as_ref().unwrap_or(&alias.name);
                    push(out, bound.as_str(), at, true, nested);
                }
            }
            // a global/nonlocal declaration makes the name visible elsewhere
            ast::Stmt::Global(s) => s.names.iter().for_each(|n| push(out, n.as_str(), at, false, true)),
            ast::Stmt::Nonlocal(s) => s.names.iter().for_each(|n| push(out, n.as_str(), at, false, true)),
            ast::Stmt::Match(s) => {
                for case in &s.cases {
                    collect_pattern(&case.pattern, at, nested, out);
                }
            }
            ast::Stmt::Try(s) => collect_handlers(&s.handlers, nested, out),
            ast::Stmt::TryStar(s) => collect_handlers(&s.handlers, nested, out),
            _ => {}
        }
        for block in stmt_blocks(stmt) {
            collect_stmts(block, inner, out);
        }
    }
}

fn collect_arguments(args: &ast::Arguments, at: usize, nested: bool, out: &mut Vec<NameUse>) {
    for a in args.posonlyargs.iter().chain(&args.args).chain(&args.kwonlyargs) {
        push(out, a.def.arg.as_str(), at, true, nested);
    }
    for a in [&args.vararg, &args.kwarg].into_iter().flatten() {
        push(out, a.arg.as_str(), at, true, nested);
    }
}

/// Whether the first use of `id` that can execute after `region` rebinds
/// it (or there is none). Inside an enclosing loop, uses that precede the
/// region also count as later, since control may come back around. Any
/// read from a nested scope keeps the name alive.
pub(crate) fn dead_after(uses: &[NameUse], id: &str, region: TextRange, loops: &[TextRange]) -> bool {
    let start = region.start().to_usize();
    let end = region.end().to_usize();
    // `uses` is in evaluation order, which differs from offset order for
    // statements like `x = x + 1`
    if uses.iter().any(|u| u.id == id && u.nested && !u.store) {
        return false;
    }
    let relevant: Vec<&NameUse> = uses.iter().filter(|u| u.id == id && !u.nested).collect();
    let first_store = |seq: &mut dyn Iterator<Item = &&NameUse>| seq.next().is_none_or(|u| u.store);

    let after = relevant.iter().filter(|u| u.offset >= end);
    if !first_store(&mut after.clone()) {
        return false;
    }
    match loops.first() {
        None => true,
        Some(outer) => {
            let (lo, hi) = (outer.start().to_usize(), outer.end().to_usize());
            let in_loop_after = after.filter(|u| u.offset < hi);
            let wrapped = relevant.iter().filter(|u| u.offset >= lo && u.offset < start);
            first_store(&mut in_loop_after.chain(wrapped))
        }
    }
}
