"""Independent reference implementations used as test oracles.

These are deliberately naive: plain Python sets and exhaustive loops, with
no code shared with the package under test.
"""

from itertools import product

from pao.dl import And, Bottom, Exists, Forall, Named, Not, Or, Top


def extension(expr, domain, cls, roles):
    """Set-semantics extension of a class expression."""
    if expr is Top:
        return set(domain)
    if expr is Bottom:
        return set()
    if isinstance(expr, Named):
        return set(cls.get(expr.name, ()))
    if isinstance(expr, Not):
        return set(domain) - extension(expr.arg, domain, cls, roles)
    if isinstance(expr, And):
        out = set(domain)
        for m in expr.members:
            out &= extension(m, domain, cls, roles)
        return out
    if isinstance(expr, Or):
        out = set()
        for m in expr.members:
            out |= extension(m, domain, cls, roles)
        return out
    if isinstance(expr, (Exists, Forall)):
        pairs = roles.get(expr.role, set())
        if expr.inverse:
            pairs = {(b, a) for a, b in pairs}
        fill = extension(expr.filler, domain, cls, roles)
        if isinstance(expr, Exists):
            return {x for x in domain if any(a == x and b in fill for a, b in pairs)}
        return {x for x in domain if all(b in fill for a, b in pairs if a == x)}
    raise TypeError(expr)


def interpretations(domain, class_names, role_names):
    """Every interpretation over ``domain`` (exponential; keep inputs tiny)."""
    elems = list(domain)
    subsets = [frozenset(e for e, bit in zip(elems, bits) if bit)
               for bits in product((0, 1), repeat=len(elems))]
    pairs = [(a, b) for a in elems for b in elems]
    relations = [frozenset(p for p, bit in zip(pairs, bits) if bit)
                 for bits in product((0, 1), repeat=len(pairs))]
    for cs in product(subsets, repeat=len(class_names)):
        for rs in product(relations, repeat=len(role_names)):
            yield dict(zip(class_names, cs)), dict(zip(role_names, rs))


def brute_force_answers(trace, query_patterns, step):
    """All bindings of ``query_patterns`` against one set of triples, by
    enumerating every assignment of the pattern variables to trace terms."""
    from pao.rdf import Triple, Var
    facts = trace
    variables = sorted({x.name for t in query_patterns for x in t if isinstance(x, Var)})
    terms = sorted({x for t in facts for x in (t.s, t.p, t.o)}, key=str)
    out = set()
    for values in product(terms, repeat=len(variables)):
        b = dict(zip(variables, values))

        def g(x):
            return b[x.name] if isinstance(x, Var) else x
        if all(Triple(g(t.s), g(t.p), g(t.o)) in facts for t in query_patterns):
            out.add(tuple(sorted((k, str(v)) for k, v in b.items())))
    return out


def naive_temporal_answers(trace, query):
    """Answers of a parsed temporal query by exhaustive enumeration.

    Enumerates the step variable, an independent step for every block, and
    every assignment of the query variables to trace terms.  Type triples
    are rigid: visible from the snapshot they appear in up to the vantage
    step (the step itself when projected, else the last step).  No ontology.
    """
    from pao.rdf import RDF_TYPE, Triple, Var
    snaps = trace.snapshots
    last = len(snaps) - 1
    labels = trace.labels
    variables = sorted({x.name for b in query.blocks for t in b.patterns for x in t if isinstance(x, Var)})
    terms = sorted({x for s in snaps for t in s.triples for x in (t.s, t.o)}, key=str)
    step_var = next((b.selector.var for b in query.blocks if b.selector.kind in ("var", "offset")), None)
    projected_step = query.projection is not None and step_var in query.projection

    def facts(idx, vantage):
        plain = {t for t in snaps[idx].triples if t.p != RDF_TYPE}
        types = {t for s in snaps[: max(idx, vantage) + 1] for t in s.triples if t.p == RDF_TYPE}
        return plain | types

    def block_steps(sel, n):
        if sel.kind == "var":
            return [n]
        if sel.kind == "offset":
            return [n + sel.offset] if n + sel.offset <= last else []
        if sel.kind == "label":
            return [labels.index(sel.label)] if sel.label in labels else []
        return list(range(len(snaps)))

    found = []      # (binding dict, n, min-block step)
    for n in (range(len(snaps)) if step_var else [None]):
        vantage = n if projected_step else last
        for values in product(terms, repeat=len(variables)):
            b = dict(zip(variables, values))

            def g(x):
                return b[x.name] if isinstance(x, Var) else x
            choices = [block_steps(blk.selector, n) for blk in query.blocks]
            for steps in product(*choices):
                ok = True
                for blk, idx in zip(query.blocks, steps):
                    f = facts(idx, vantage)
                    if not all(Triple(g(t.s), g(t.p), g(t.o)) in f for t in blk.patterns):
                        ok = False
                        break
                    if any(g(fl.left) == g(fl.right) for fl in blk.filters):
                        ok = False
                        break
                if ok:
                    mstep = next((i for blk, i in zip(query.blocks, steps) if blk.selector.kind == "min"), None)
                    found.append((b, n, mstep))
    if any(blk.selector.kind == "min" for blk in query.blocks) and found:
        key = 1 if step_var else 2
        best = min(r[key] for r in found)
        found = [r for r in found if r[key] == best]
    if query.projection is None:
        return bool(found)
    return {tuple(labels[n] if v == step_var else str(b[v]) for v in query.projection) for b, n, _ in found}
