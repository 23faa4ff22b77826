"""Execution of parsed scripts: registry building, lowering, queries.

Declarations are hoisted: the registry is built from every declaration in
the script (plus the basis file, plus auto-declared observables in inline
eval mode) and frozen before any query runs.  Let bindings and queries then
execute in source order; a let binding stores the *raw* expression tree so a
later ``verify`` still sees the unreduced structure.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import dsl
from .algebra import (
    TAdd,
    TAdjoint,
    TMul,
    TScale,
    Tree,
    conjugate,
    filter_of,
    identity,
    leaf,
    normalize,
    render_expr,
    render_scalar,
    scalar_expr,
    symbol,
    transpose,
    tree_state_refs,
)
from .errors import (
    DimensionMismatch,
    MeasurementAlgebraError,
    MissingDimension,
    MissingEigenvalues,
    Span,
    UnboundVariable,
)
from .functional import expectation_symbolic, probability_symbolic, trace
from .realization import (
    Realization,
    eval_scalar,
    load_realization,
    random_realization,
    verify_normal_form,
)
from .registry import Registry, StateRef
from .scalar import ScalarExpr, tf


@dataclass
class QueryOutcome:
    """One result block for one query statement."""

    query: str
    ok: bool
    text: str = ""
    json_value: object = None
    deviation: float | None = None
    error: str | None = None
    span: Span | None = None


def fmt_number(value: float) -> str:
    value = float(value)
    if value == 0.0:
        value = 0.0  # normalize -0.0
    return f"{value:.12g}"


def _collect_auto_declarations(stmts) -> dict[str, list[str]]:
    """Observables referenced by states, with labels in first-appearance
    order; used by inline eval when nothing was declared explicitly."""
    found: dict[str, list[str]] = {}

    def visit_state(s: dsl.StateName):
        if isinstance(s.label, tuple):
            return  # joint states cannot be auto-declared
        labels = found.setdefault(s.observable, [])
        if s.label not in labels:
            labels.append(s.label)

    def visit_expr(node):
        if isinstance(node, dsl.SumNode):
            visit_expr(node.left)
            visit_expr(node.right)
        elif isinstance(node, dsl.ProductNode):
            visit_expr(node.left)
            visit_expr(node.right)
        elif isinstance(node, (dsl.NegNode, dsl.AdjointNode,
                               dsl.ConjugateNode, dsl.TransposeNode)):
            visit_expr(node.child)
        elif isinstance(node, dsl.FilterNode):
            visit_state(node.state)
        elif isinstance(node, dsl.SymbolNode):
            visit_state(node.out)
            visit_state(node.in_)
        elif isinstance(node, dsl.TFNode):
            visit_state(node.bra)
            visit_state(node.ket)

    for stmt in stmts:
        if isinstance(stmt, (dsl.LetBinding, dsl.NormalizeQuery,
                             dsl.TraceQuery, dsl.VerifyQuery)):
            visit_expr(stmt.expr)
        elif isinstance(stmt, dsl.ProbQuery):
            visit_state(stmt.a)
            visit_state(stmt.b)
        elif isinstance(stmt, dsl.ExpectQuery):
            visit_state(stmt.b)
    return found


def build_registry(stmts, basis_data: dict | None = None,
                   auto_declare: bool = False) -> Registry:
    """Registry from script declarations, then basis-file observables, then
    (optionally) observables inferred from expression states."""
    registry = Registry()
    for stmt in stmts:
        try:
            if isinstance(stmt, dsl.ObservableDecl):
                labels = [lab for lab, _ in stmt.entries]
                values = [val for _, val in stmt.entries]
                has_values = [v is not None for v in values]
                if any(has_values) and not all(has_values):
                    raise MeasurementAlgebraError(
                        f"observable {stmt.name!r}: either every label "
                        "carries a value or none does")
                registry.define_observable(
                    stmt.name, labels, values if all(has_values) else None)
            elif isinstance(stmt, dsl.JointDecl):
                registry.joint_observable(stmt.name, list(stmt.components))
        except MeasurementAlgebraError as exc:
            if exc.span is None:
                exc.span = stmt.span
            raise
    if basis_data is not None:
        for name, entry in basis_data.get("observables", {}).items():
            if name in registry:
                continue
            labels = entry.get("labels")
            if labels:
                registry.define_observable(name, list(labels),
                                           entry.get("values"))
    if auto_declare:
        for name, labels in _collect_auto_declarations(stmts).items():
            if name not in registry:
                registry.define_observable(name, labels)
    return registry.freeze()


def resolve_state(state: dsl.StateName, registry: Registry) -> StateRef:
    try:
        return registry.state(state.observable, state.label)
    except MeasurementAlgebraError as exc:
        exc.span = state.span
        raise


def _observable_or_fail(registry: Registry, name: str, span):
    try:
        return registry.observable(name)
    except MeasurementAlgebraError as exc:
        exc.span = span
        raise


def lower_expr(node, registry: Registry, env: dict[str, Tree]) -> Tree:
    """AST expression to a raw tree, resolving states and variables."""
    if isinstance(node, dsl.SumNode):
        left = lower_expr(node.left, registry, env)
        right = lower_expr(node.right, registry, env)
        if node.op == "-":
            right = TScale(ScalarExpr.number(-1), right)
        return TAdd(left, right)
    if isinstance(node, dsl.ProductNode):
        return TMul(lower_expr(node.left, registry, env),
                    lower_expr(node.right, registry, env))
    if isinstance(node, dsl.NegNode):
        return TScale(ScalarExpr.number(-1),
                      lower_expr(node.child, registry, env))
    if isinstance(node, dsl.AdjointNode):
        return TAdjoint(lower_expr(node.child, registry, env))
    if isinstance(node, dsl.ConjugateNode):
        # Conjugation lands in the conjugate algebra, which no raw-tree
        # matrix evaluation can cross; apply it to the reduced subexpression.
        return leaf(conjugate(normalize(lower_expr(node.child, registry, env))))
    if isinstance(node, dsl.TransposeNode):
        return leaf(transpose(normalize(lower_expr(node.child, registry, env))))
    if isinstance(node, dsl.FilterNode):
        return leaf(filter_of(resolve_state(node.state, registry)))
    if isinstance(node, dsl.SymbolNode):
        return leaf(symbol(resolve_state(node.out, registry),
                           resolve_state(node.in_, registry)))
    if isinstance(node, dsl.IdentityNode):
        return leaf(identity())
    if isinstance(node, dsl.TFNode):
        return leaf(scalar_expr(tf(resolve_state(node.bra, registry),
                                   resolve_state(node.ket, registry))))
    if isinstance(node, dsl.NumberNode):
        return leaf(scalar_expr(ScalarExpr.number(node.value)))
    if isinstance(node, dsl.VarRefNode):
        if node.name not in env:
            raise UnboundVariable(f"unbound variable {node.name!r}", node.span)
        return env[node.name]
    raise TypeError(f"not an expression node: {node!r}")


def _random_realization_for(tree: Tree, registry: Registry,
                            seed: int) -> Realization:
    """Seeded stand-in realization for ``verify`` without a basis file."""
    obs_ids = sorted({ref.observable for ref in tree_state_refs(tree)
                      if not registry.observable(ref.observable).is_joint})
    if not obs_ids:
        return random_realization(2, [], seed, registry)
    sizes = {len(registry.observable(i).labels) for i in obs_ids}
    if len(sizes) != 1:
        raise DimensionMismatch(
            "cannot build a random realization: observables in the "
            "expression have different label counts; provide a basis file")
    return random_realization(sizes.pop(), obs_ids, seed, registry)


def execute(stmts, basis_data: dict | None = None, *,
            tolerance: float | None = None, seed: int = 0,
            auto_declare: bool = False) -> list[QueryOutcome]:
    """Run a parsed program and collect one outcome per query.

    Declaration and name-resolution problems raise (the CLI maps them to
    exit code 2); runtime query failures are reported per query.
    """
    registry = build_registry(stmts, basis_data, auto_declare)
    realization = None
    if basis_data is not None:
        if tolerance is not None:
            basis_data = dict(basis_data, tolerance=tolerance)
        realization = load_realization(basis_data, registry)

    env: dict[str, Tree] = {}
    outcomes: list[QueryOutcome] = []
    for stmt in stmts:
        if isinstance(stmt, (dsl.ObservableDecl, dsl.JointDecl)):
            continue
        if isinstance(stmt, dsl.LetBinding):
            env[stmt.name] = lower_expr(stmt.expr, registry, env)
            continue
        outcomes.append(_run_query(stmt, registry, realization, env,
                                   tolerance, seed))
    return outcomes


def _mapped(realization: Realization | None, refs) -> bool:
    return (realization is not None
            and all(r.observable in realization.bases for r in refs))


def _run_query(stmt, registry, realization, env, tolerance,
               seed) -> QueryOutcome:
    query_text = dsl.render_statement(stmt)
    try:
        if isinstance(stmt, dsl.NormalizeQuery):
            tree = lower_expr(stmt.expr, registry, env)
            text = render_expr(normalize(tree), registry)
            return QueryOutcome(query_text, True, text, text)

        if isinstance(stmt, dsl.TraceQuery):
            tree = lower_expr(stmt.expr, registry, env)
            dim = realization.dimension if realization is not None else None
            result = trace(normalize(tree), dim_hint=dim)
            text = render_scalar(result, registry)
            return QueryOutcome(query_text, True, text, text)

        if isinstance(stmt, dsl.VerifyQuery):
            tree = lower_expr(stmt.expr, registry, env)
            r = realization
            if r is None:
                r = _random_realization_for(tree, registry, seed)
            report = verify_normal_form(r, tree, tolerance)
            if report.skipped:
                text = f"SKIP ({report.reason})"
                return QueryOutcome(query_text, True, text, "SKIP")
            status = "PASS" if report.passed else "FAIL"
            text = (f"{status} deviation={fmt_number(report.max_deviation)} "
                    f"tol={fmt_number(report.tolerance)}")
            return QueryOutcome(query_text, report.passed, text, status,
                                deviation=report.max_deviation)

        if isinstance(stmt, dsl.ProbQuery):
            a = resolve_state(stmt.a, registry)
            b = resolve_state(stmt.b, registry)
            sym = probability_symbolic(a, b)
            if _mapped(realization, [a, b]):
                value = eval_scalar(realization, sym).real
                return QueryOutcome(query_text, True, fmt_number(value), value)
            text = render_scalar(sym, registry)
            return QueryOutcome(query_text, True, text, text)

        if isinstance(stmt, dsl.ExpectQuery):
            obs = _observable_or_fail(registry, stmt.observable, stmt.span)
            b = resolve_state(stmt.b, registry)
            sym = expectation_symbolic(obs.id, b, registry)
            refs = [b] + registry.states(obs.id)
            if _mapped(realization, refs):
                value = eval_scalar(realization, sym).real
                return QueryOutcome(query_text, True, fmt_number(value), value)
            text = render_scalar(sym, registry)
            return QueryOutcome(query_text, True, text, text)

        if isinstance(stmt, dsl.SpectrumQuery):
            obs = _observable_or_fail(registry, stmt.observable, stmt.span)
            parts = []
            json_items = []
            for label, value in registry.spectrum(obs.id):
                if isinstance(label, tuple):
                    label = "(" + ",".join(label) + ")"
                if value is None:
                    parts.append(label)
                    json_items.append([label, None])
                else:
                    parts.append(f"{label}:{value}")
                    json_items.append([label, str(value)])
            text = ", ".join(parts)
            return QueryOutcome(query_text, True, text, json_items)

        raise TypeError(f"not a query: {stmt!r}")
    except (MissingDimension, MissingEigenvalues, DimensionMismatch) as exc:
        # Runtime query failures: report and move on.  Name-resolution
        # errors propagate and abort the whole run instead.
        return QueryOutcome(query_text, False, error=exc.message,
                            span=exc.span or getattr(stmt, "span", None))
