//! Elaboration of `inductive` blocks into fixed points of sums of
//! properly indexed families, plus one definition per constructor.
//!
//! Uniform parameters become outer λs. Non-uniform parameters and indices
//! are fused into the single index of the fixed point (left-nested pairs
//! when there are several). A mutual block becomes one family indexed by a
//! tag `1 + (1 + …)`. Constructors sharing a constant result index are
//! grouped under one `Σ^e_{_:1}`; a constructor whose index depends on its
//! first argument binds that argument in its `Σ^e`.

use std::collections::HashSet;

use thiserror::Error;


use super::ast::*;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ElabError {
    pub line: usize,
    pub message: String,
}

/// A definition produced by elaboration, still in surface syntax.
#[derive(Clone, Debug, PartialEq)]
pub struct Emitted {
    pub name: String,
    pub ty: Expr,
    pub body: Expr,
    pub line: usize,
}

struct Ctor {
    name: String,
    args: Vec<Binder>,
    /// The whole result type `M params indices`.
    result: Expr,
    /// Result arguments after the uniform parameters.
    index_args: Vec<Expr>,
    member: usize,
}

enum Clause {
    /// A constructor whose result index is the generic index variable.
    Plain(usize),
    /// Constructors with the same constant index.
    Group(Expr, Vec<usize>),
    /// A constructor whose index depends on its first argument.
    Dependent(Expr, usize),
}

fn binders(e: &Expr) -> (Vec<Binder>, &Expr) {
    let mut out = Vec::new();
    let mut e = e;
    loop {
        match e {
            Expr::Pi(bs, body) => {
                out.extend(bs.iter().cloned());
                e = body;
            }
            Expr::Arrow(a, b) => {
                out.push(Binder { name: "_".into(), ty: (**a).clone() });
                e = b;
            }
            _ => return (out, e),
        }
    }
}

fn pi(bs: &[Binder], body: Expr) -> Expr {
    if bs.is_empty() {
        body
    } else {
        Expr::Pi(bs.to_vec(), Box::new(body))
    }
}

fn lam(bs: &[Binder], body: Expr) -> Expr {
    if bs.is_empty() {
        body
    } else {
        Expr::Lam(bs.to_vec(), Box::new(body))
    }
}

fn apps(f: Expr, args: impl IntoIterator<Item = Expr>) -> Expr {
    args.into_iter().fold(f, Expr::app)
}

fn vars(bs: &[Binder]) -> Vec<Expr> {
    bs.iter().map(|b| Expr::var(&b.name)).collect()
}

/// `A₁ + (A₂ + …)`, or `0` when empty.
fn sum(mut parts: Vec<Expr>) -> Expr {
    let Some(mut acc) = parts.pop() else { return Expr::Empty };
    while let Some(p) = parts.pop() {
        acc = Expr::Sum(Box::new(p), Box::new(acc));
    }
    acc
}

/// The `k`-th of `n` right-nested injections.
fn inject(k: usize, n: usize, v: Expr) -> Expr {
    let mut v = if k + 1 < n { Expr::Inl(Box::new(v)) } else { v };
    for _ in 0..k {
        v = Expr::Inr(Box::new(v));
    }
    v
}

/// Dependent tuple type of a telescope: `1`, `A`, or `Σ (x : A). …`.
fn tuple_type(args: &[Binder]) -> Expr {
    match args {
        [] => Expr::Unit,
        [a] => a.ty.clone(),
        [a, rest @ ..] => Expr::DepSum(Box::new(a.clone()), Box::new(tuple_type(rest))),
    }
}

fn tuple(items: &[Expr]) -> Expr {
    match items {
        [] => Expr::UnitVal,
        [a] => a.clone(),
        [a, rest @ ..] => Expr::Pair(Box::new(a.clone()), Box::new(tuple(rest)), None),
    }
}

/// Left-nested pair of index values.
fn index_tuple(items: &[Expr]) -> Expr {
    let mut it = items.iter().cloned();
    let first = it.next().expect("non-empty index");
    it.fold(first, |acc, x| Expr::Pair(Box::new(acc), Box::new(x), None))
}

fn collect_names(e: &Expr, out: &mut HashSet<String>) {
    let add_binders = |bs: &[Binder], out: &mut HashSet<String>| {
        for b in bs {
            out.insert(b.name.clone());
            collect_names(&b.ty, out);
        }
    };
    match e {
        Expr::Var(x) => {
            out.insert(x.clone());
        }
        Expr::Pi(bs, b) | Expr::Lam(bs, b) => {
            add_binders(bs, out);
            collect_names(b, out);
        }
        Expr::Arrow(a, b) | Expr::App(a, b) | Expr::Sum(a, b) | Expr::Times(a, b) | Expr::Ascribe(a, b) => {
            collect_names(a, out);
            collect_names(b, out);
        }
        Expr::DepSum(b, body) => {
            add_binders(std::slice::from_ref(b), out);
            collect_names(body, out);
        }
        Expr::Inl(a) | Expr::Inr(a) | Expr::Forced(a) | Expr::Coerce(_, a) | Expr::Intro(_, a) => {
            collect_names(a, out)
        }
        Expr::Mu(x, k, b) | Expr::Nu(x, k, b) => {
            out.insert(x.clone());
            collect_names(k, out);
            collect_names(b, out);
        }
        Expr::Pair(a, b, _) => {
            collect_names(a, out);
            collect_names(b, out);
        }
        // Anything else never appears in declarations we elaborate.
        _ => {}
    }
}

struct Fresh {
    taken: HashSet<String>,
}

impl Fresh {
    fn name(&mut self, base: &str) -> String {
        let n = (0..).map(|i| if i == 0 { base.to_string() } else { format!("{base}{i}") });
        let name = n.into_iter().find(|n| !self.taken.contains(n)).unwrap();
        self.taken.insert(name.clone());
        name
    }
}

struct Block<'a> {
    decls: &'a [InductiveDecl],
    family: String,
    params: Vec<Binder>,
    uniform: usize,
    /// Non-uniform parameters followed by indices; empty for mutual blocks.
    index: Vec<Binder>,
    mutual: bool,
    fresh: Fresh,
}

impl Block<'_> {
    fn err<T>(&self, line: usize, message: impl Into<String>) -> Result<T, ElabError> {
        Err(ElabError { line, message: message.into() })
    }

    fn member(&self, name: &str) -> Option<usize> {
        self.decls.iter().position(|d| d.name == name)
    }

    /// Tag of the `j`-th member of a mutual block.
    fn tag(&self, j: usize) -> Expr {
        inject(j, self.decls.len(), Expr::UnitVal)
    }

    fn tag_type(&self) -> Expr {
        sum(vec![Expr::Unit; self.decls.len()])
    }

    fn index_type(&self) -> Option<Expr> {
        if self.mutual {
            return Some(self.tag_type());
        }
        let tys: Vec<Expr> = self.index.iter().map(|b| b.ty.clone()).collect();
        match tys.len() {
            0 => None,
            _ => {
                let mut it = tys.into_iter();
                let first = it.next().unwrap();
                Some(it.fold(first, |acc, t| Expr::Times(Box::new(acc), Box::new(t))))
            }
        }
    }

    /// The index value carried by an occurrence `M a₁ … aₙ`, given the
    /// arguments after the uniform parameters.
    fn index_value(&self, member: usize, rest: &[Expr]) -> Option<Expr> {
        if self.mutual {
            Some(self.tag(member))
        } else if rest.is_empty() {
            None
        } else {
            Some(index_tuple(rest))
        }
    }

    /// Number of arguments an occurrence of a member must have.
    fn arity(&self) -> usize {
        if self.mutual {
            self.params.len()
        } else {
            self.uniform + self.index.len()
        }
    }

    /// Replaces every occurrence of a member by the family variable.
    fn rewrite(&self, e: &Expr, line: usize) -> Result<Expr, ElabError> {
        let (head, args) = e.spine();
        if let Expr::Var(x) = head {
            if let Some(j) = self.member(x) {
                let want = self.arity();
                if args.len() != want {
                    return self.err(
                        line,
                        format!("`{x}` must be applied to {want} arguments inside its own declaration"),
                    );
                }
                for (i, (a, p)) in args.iter().zip(&self.params[..self.uniform]).enumerate() {
                    if **a != Expr::var(&p.name) {
                        return self.err(line, format!("argument {} of `{x}` must be the parameter `{}`", i + 1, p.name));
                    }
                }
                let rest = args[self.uniform..]
                    .iter()
                    .map(|a| self.rewrite(a, line))
                    .collect::<Result<Vec<_>, _>>()?;
                let head = Expr::var(&self.family);
                return Ok(match self.index_value(j, &rest) {
                    Some(v) => Expr::app(head, v),
                    None => head,
                });
            }
        }
        let r = |e: &Expr| self.rewrite(e, line).map(Box::new);
        let rb = |bs: &[Binder]| {
            bs.iter()
                .map(|b| Ok(Binder { name: b.name.clone(), ty: self.rewrite(&b.ty, line)? }))
                .collect::<Result<Vec<_>, ElabError>>()
        };
        Ok(match e {
            Expr::Pi(bs, b) => Expr::Pi(rb(bs)?, r(b)?),
            Expr::Lam(bs, b) => Expr::Lam(rb(bs)?, r(b)?),
            Expr::Arrow(a, b) => Expr::Arrow(r(a)?, r(b)?),
            Expr::App(a, b) => Expr::App(r(a)?, r(b)?),
            Expr::Sum(a, b) => Expr::Sum(r(a)?, r(b)?),
            Expr::Times(a, b) => Expr::Times(r(a)?, r(b)?),
            Expr::Ascribe(a, b) => Expr::Ascribe(r(a)?, r(b)?),
            Expr::DepSum(b, body) => Expr::DepSum(Box::new(rb(std::slice::from_ref(b))?.remove(0)), r(body)?),
            Expr::Inl(a) => Expr::Inl(r(a)?),
            Expr::Inr(a) => Expr::Inr(r(a)?),
            Expr::Forced(a) => Expr::Forced(r(a)?),
            Expr::Coerce(c, a) => Expr::Coerce(*c, r(a)?),
            Expr::Intro(c, a) => Expr::Intro(*c, r(a)?),
            Expr::Pair(a, b, s) => Expr::Pair(r(a)?, r(b)?, s.clone()),
            Expr::Mu(x, k, b) => Expr::Mu(x.clone(), r(k)?, r(b)?),
            Expr::Nu(x, k, b) => Expr::Nu(x.clone(), r(k)?, r(b)?),
            other => other.clone(),
        })
    }

    fn mentions_member(&self, e: &Expr) -> bool {
        self.decls.iter().any(|d| e.mentions(&d.name))
    }
}

/// Elaborates one `inductive … with …` block.
pub fn elaborate(decls: &[InductiveDecl]) -> Result<Vec<Emitted>, ElabError> {
    let first = decls.first().expect("an inductive block has at least one member");
    let line = first.line;
    let mutual = decls.len() > 1;
    let mut taken = HashSet::new();
    for d in decls {
        taken.insert(d.name.clone());
        collect_names(&d.arity, &mut taken);
        for b in &d.params {
            taken.insert(b.name.clone());
            collect_names(&b.ty, &mut taken);
        }
        for (c, ty) in &d.constructors {
            taken.insert(c.clone());
            collect_names(ty, &mut taken);
        }
    }
    let family = if mutual { decls.iter().map(|d| d.name.as_str()).collect::<String>() } else { first.name.clone() };
    let (first_indices, first_sort) = binders(&first.arity);
    let Expr::Sort(sort) = first_sort else {
        return Err(ElabError { line, message: format!("the arity of `{}` must end in a sort", first.name) });
    };
    let sort = *sort;
    for d in decls {
        let (indices, s) = binders(&d.arity);
        if *s != Expr::Sort(sort) {
            return Err(ElabError {
                line: d.line,
                message: "mutual blocks mixing sorts are not supported; encode them by hand".into(),
            });
        }
        if mutual && (!indices.is_empty() || d.params != first.params) {
            return Err(ElabError {
                line: d.line,
                message: "members of a mutual block must share their parameters and have no indices".into(),
            });
        }
    }
    for b in &first_indices {
        if b.name != "_" && first.constructors.iter().any(|(_, t)| t.mentions(&b.name)) {
            return Err(ElabError { line, message: format!("index `{}` is not in scope in constructors", b.name) });
        }
    }

    let mut block = Block {
        decls,
        family,
        params: first.params.clone(),
        uniform: first.params.len(),
        index: Vec::new(),
        mutual,
        fresh: Fresh { taken },
    };

    // Split constructor types and find the uniform prefix.
    let mut ctors = Vec::new();
    for (j, d) in decls.iter().enumerate() {
        for (cname, cty) in &d.constructors {
            let (mut args, result) = binders(cty);
            for a in &mut args {
                if a.name == "_" {
                    a.name = block.fresh.name("x");
                }
            }
            let (head, rargs) = result.spine();
            if *head != Expr::var(&d.name) {
                return block.err(d.line, format!("constructor `{cname}` must build a `{}`", d.name));
            }
            let mut occurrences: Vec<Vec<Expr>> = vec![rargs.into_iter().cloned().collect()];
            for a in &args {
                find_occurrences(&a.ty, decls, &mut occurrences);
            }
            for occ in &occurrences {
                let same = block.params[..block.uniform.min(occ.len())]
                    .iter()
                    .zip(occ)
                    .take_while(|(p, a)| **a == Expr::var(&p.name))
                    .count();
                block.uniform = block.uniform.min(same);
            }
            ctors.push((j, cname.clone(), args, result.clone(), d.line));
        }
    }
    if mutual && block.uniform != block.params.len() {
        return block.err(line, "parameters of a mutual block must be uniform");
    }
    if !mutual {
        block.index = block.params[block.uniform..].to_vec();
        let named = first_indices.iter().map(|b| {
            let name = if b.name == "_" { block.fresh.name("i") } else { b.name.clone() };
            Binder { name, ty: b.ty.clone() }
        });
        let named: Vec<_> = named.collect();
        block.index.extend(named);
        if block.index.len() > 1 {
            for (k, b) in block.index.iter().enumerate() {
                if block.index[..k].iter().any(|prev| b.ty.mentions(&prev.name)) {
                    return block.err(line, "several indices must not depend on one another");
                }
            }
        }
    }
    let nonuniform = &block.params[block.uniform..];
    if block.index.len() > 1 {
        if let Some(p) = nonuniform.iter().find(|p| ctors.iter().any(|c| c.2.iter().any(|a| a.ty.mentions(&p.name)))) {
            return block.err(
                line,
                format!("non-uniform parameter `{}` cannot be used in constructor arguments of a family with several indices", p.name),
            );
        }
    }

    let mut elaborated = Vec::new();
    for (member, name, args, result, cline) in ctors {
        let rewritten = args
            .iter()
            .map(|a| Ok(Binder { name: a.name.clone(), ty: block.rewrite(&a.ty, cline)? }))
            .collect::<Result<Vec<_>, ElabError>>()?;
        let (_, rargs) = result.spine();
        let index_args: Vec<Expr> = rargs[block.uniform..].iter().map(|e| (*e).clone()).collect();
        for e in &index_args {
            if block.mentions_member(e) {
                return block.err(cline, format!("the result index of `{name}` mentions the family"));
            }
        }
        if block.rewrite(&result, cline).is_err() {
            return block.err(cline, format!("the result of `{name}` is not fully applied"));
        }
        elaborated.push((Ctor { name, args: rewritten, result, index_args, member }, cline));
    }

    let recursive = elaborated.iter().any(|(c, _)| c.args.iter().any(|a| a.ty.mentions(&block.family)));
    let generic_var = match (mutual, nonuniform, first_indices.is_empty()) {
        (false, [p], true) => Some(p.name.clone()),
        _ => None,
    };

    // Classify constructors into clauses.
    let mut clauses: Vec<Clause> = Vec::new();
    let indexed = mutual || !block.index.is_empty();
    for (k, (c, cline)) in elaborated.iter().enumerate() {
        if !indexed {
            clauses.push(Clause::Plain(k));
            continue;
        }
        let value = block.index_value(c.member, &c.index_args).expect("indexed family");
        let shadowed = c.args.iter().any(|a| Some(&a.name) == generic_var.as_ref());
        if generic_var.as_ref().is_some_and(|g| value == Expr::var(g)) && !shadowed {
            clauses.push(Clause::Plain(k));
            continue;
        }
        let depends: Vec<usize> = (0..c.args.len()).filter(|&i| value.mentions(&c.args[i].name)).collect();
        match depends.as_slice() {
            [] => match clauses.last_mut() {
                Some(Clause::Group(e, members)) if *e == value => members.push(k),
                _ => clauses.push(Clause::Group(value, vec![k])),
            },
            [0] => clauses.push(Clause::Dependent(value, k)),
            _ => {
                return block.err(
                    *cline,
                    format!("the result index of `{}` may only depend on its first argument", c.name),
                )
            }
        }
    }

    let index_ty = block.index_type();
    let sigma = |block: &Block, index: Expr, binder: Binder, body: Expr| {
        Expr::SigmaF(Box::new(SigmaAnnot {
            index,
            codomain: block.index_type().expect("indexed family"),
            binder: Box::new(binder),
            body,
        }))
    };
    let unit_binder = Binder { name: "_".into(), ty: Expr::Unit };
    let clause_families: Vec<Expr> = clauses
        .iter()
        .map(|cl| match cl {
            Clause::Plain(k) => tuple_type(&elaborated[*k].0.args),
            Clause::Group(e, ks) => {
                let fibers = ks.iter().map(|k| tuple_type(&elaborated[*k].0.args)).collect();
                sigma(&block, e.clone(), unit_binder.clone(), sum(fibers))
            }
            Clause::Dependent(e, k) => {
                let args = &elaborated[*k].0.args;
                sigma(&block, e.clone(), args[0].clone(), tuple_type(&args[1..]))
            }
        })
        .collect();

    let index_var = match (&generic_var, block.index.as_slice()) {
        (Some(g), _) => g.clone(),
        (None, [b]) => b.name.clone(),
        _ => block.fresh.name("i"),
    };
    let body = match &index_ty {
        None => sum(clause_families),
        Some(ity) => {
            if let ([single], [Clause::Group(..) | Clause::Dependent(..)]) = (clause_families.as_slice(), clauses.as_slice()) {
                single.clone()
            } else {
                let parts = clauses
                    .iter()
                    .zip(clause_families)
                    .map(|(cl, fam)| match cl {
                        Clause::Plain(_) => fam,
                        _ => Expr::app(fam, Expr::var(&index_var)),
                    })
                    .collect();
                Expr::Lam(vec![Binder { name: index_var.clone(), ty: ity.clone() }], Box::new(sum(parts)))
            }
        }
    };
    let kind = match &index_ty {
        None => Expr::Sort(sort),
        Some(ity) => Expr::arrow(ity.clone(), Expr::Sort(sort)),
    };
    let family_term = if recursive { Expr::Mu(block.family.clone(), Box::new(kind), Box::new(body)) } else { body };
    let uniform_params = &block.params[..block.uniform];
    let inner = if !mutual && block.index.len() > 1 {
        let tuple = index_tuple(&vars(&block.index));
        Expr::Lam(block.index.clone(), Box::new(Expr::app(family_term, tuple)))
    } else {
        family_term
    };
    let family_ty = if mutual {
        pi(&block.params, Expr::arrow(block.tag_type(), Expr::Sort(sort)))
    } else {
        pi(&block.params, first.arity.clone())
    };
    let mut out = vec![Emitted {
        name: block.family.clone(),
        ty: family_ty,
        body: lam(uniform_params, inner),
        line,
    }];
    if mutual {
        for (j, d) in decls.iter().enumerate() {
            let applied = apps(Expr::var(&block.family), vars(&block.params));
            out.push(Emitted {
                name: d.name.clone(),
                ty: pi(&block.params, Expr::Sort(sort)),
                body: lam(&block.params, Expr::app(applied, block.tag(j))),
                line: d.line,
            });
        }
    }

    // Constructor definitions.
    let n = clauses.len();
    for (ci, cl) in clauses.iter().enumerate() {
        let members: Vec<(usize, Expr)> = match cl {
            Clause::Plain(k) => vec![(*k, tuple(&vars(&elaborated[*k].0.args)))],
            Clause::Group(_, ks) => ks
                .iter()
                .enumerate()
                .map(|(g, k)| {
                    let v = inject(g, ks.len(), tuple(&vars(&elaborated[*k].0.args)));
                    (*k, Expr::Pair(Box::new(Expr::UnitVal), Box::new(v), None))
                })
                .collect(),
            Clause::Dependent(_, k) => {
                let vs = vars(&elaborated[*k].0.args);
                vec![(*k, Expr::Pair(Box::new(vs[0].clone()), Box::new(tuple(&vs[1..])), None))]
            }
        };
        for (k, value) in members {
            let (c, cline) = &elaborated[k];
            let original: Vec<Binder> = c
                .args
                .iter()
                .zip(binders_of(decls, c))
                .map(|(a, orig)| Binder { name: a.name.clone(), ty: orig })
                .collect();
            let mut lam_binders = block.params.clone();
            lam_binders.extend(original.iter().cloned());
            out.push(Emitted {
                name: c.name.clone(),
                ty: pi(&block.params, pi(&original, c.result.clone())),
                body: lam(&lam_binders, inject(ci, n, value)),
                line: *cline,
            });
        }
    }
    Ok(out)
}

/// Argument types of a constructor as written, before rewriting.
fn binders_of(decls: &[InductiveDecl], c: &Ctor) -> Vec<Expr> {
    let d = &decls[c.member];
    let (_, ty) = d.constructors.iter().find(|(n, _)| *n == c.name).expect("constructor exists");
    binders(ty).0.into_iter().map(|b| b.ty).collect()
}

fn find_occurrences(e: &Expr, decls: &[InductiveDecl], out: &mut Vec<Vec<Expr>>) {
    let is_member = |x: &str| decls.iter().any(|d| d.name == x);
    let mut go = |e: &Expr| find_occurrences(e, decls, out);
    match e {
        Expr::Var(x) if is_member(x) => out.push(Vec::new()),
        Expr::App(..) => {
            let (head, args) = e.spine();
            let args: Vec<Expr> = args.into_iter().cloned().collect();
            match head {
                Expr::Var(x) if is_member(x) => out.push(args.clone()),
                Expr::Var(_) => {}
                other => find_occurrences(other, decls, out),
            }
            for a in &args {
                find_occurrences(a, decls, out);
            }
        }
        Expr::Pi(bs, b) | Expr::Lam(bs, b) => {
            for bd in bs {
                go(&bd.ty);
            }
            go(b);
        }
        Expr::Arrow(a, b) | Expr::Sum(a, b) | Expr::Times(a, b) | Expr::Ascribe(a, b) | Expr::Pair(a, b, _) => {
            go(a);
            go(b);
        }
        Expr::DepSum(bd, body) => {
            go(&bd.ty);
            go(body);
        }
        Expr::Inl(a) | Expr::Inr(a) | Expr::Forced(a) | Expr::Coerce(_, a) | Expr::Intro(_, a) => go(a),
        Expr::Mu(_, k, b) | Expr::Nu(_, k, b) => {
            go(k);
            go(b);
        }
        _ => {}
    }
}
