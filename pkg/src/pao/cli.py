"""Command-line interface: ``pao merge``, ``pao run``, ``pao query``.

Exit codes: 0 ok, 1 parse error, 2 inconsistency, 3 unresolved ambiguity,
4 precondition or planning failure.
"""

from __future__ import annotations

import sys
from functools import wraps
from pathlib import Path

import click

from .cnl.factual import parse_factual
from .cnl.lexicon import build_lexicon
from .cnl.ontological import load_ontologies
from .cnl.render import render_labelled, render_paraphrase, reemit_text
from .errors import MergeInconsistent, PaoError
from .executor import execute_atoms
from .merge import SenseInventory, partition_senses
from .query import answers_json, evaluate, parse_queries, render_answer
from .rdf import Trace
from .templates import check_universal, load_templates
from .wsd import VALID, INVALID, ambiguity_report, candidate_label, disambiguate, parse_choices

_HINT_MARK = {VALID: "[valid]", INVALID: "[invalid]"}


def _fail(stage: str, err: PaoError):
    click.echo(f"error [{stage}]: {err}", err=True)
    if isinstance(err, MergeInconsistent):
        for rec in err.log:
            click.echo(f"  [{rec.verdict}] {rec.sub} SubClassOf {rec.sup} ({rec.reason})", err=True)
    sys.exit(err.exit_code)


def staged(stage: str):
    """Turn PaoError into a stage-tagged diagnostic and the matching exit code."""
    def deco(fn):
        @wraps(fn)
        def inner(*a, **kw):
            try:
                return fn(*a, **kw)
            except PaoError as e:
                _fail(getattr(e, "stage", stage), e)
        return inner
    return deco


def _tag(stage):
    class _Ctx:
        def __enter__(self):
            return self

        def __exit__(self, et, ev, tb):
            if isinstance(ev, PaoError) and not hasattr(ev, "stage"):
                ev.stage = stage
            return False
    return _Ctx()


def load_inventory(inventory: str | None, ontologies) -> SenseInventory:
    if inventory:
        return SenseInventory.loads(Path(inventory).read_text(encoding="utf-8"))
    if not ontologies:
        raise click.UsageError("give --inventory or at least one --ontology")
    return partition_senses(load_ontologies(list(ontologies)))


@click.group()
@click.version_option(package_name="artifact")
def main():
    """Ontology merging, CNL disambiguation and procedural execution."""


@main.command("merge")
@click.argument("ontologies", nargs=-1, required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("-o", "--output", type=click.Path(dir_okay=False), help="Write the sense inventory (JSON).")
@click.option("--report", type=click.Path(dir_okay=False), help="Write the merge report here instead of stdout.")
@click.option("--alias", multiple=True, help="Override a sense name: QNAME=Name.")
@staged("merge")
def merge_cmd(ontologies, output, report, alias):
    """Merge micro-ontologies into a sense inventory."""
    aliases = {}
    for a in alias:
        if "=" not in a:
            raise click.BadParameter(f"expected QNAME=Name, got {a!r}", param_hint="--alias")
        k, v = a.split("=", 1)
        aliases[k.strip()] = v.strip()
    with _tag("parse"):
        onts = load_ontologies(list(ontologies))
    inv = partition_senses(onts, aliases=aliases)
    text = inv.report()
    if report:
        Path(report).write_text(text, encoding="utf-8")
    else:
        click.echo(text, nl=False)
    if output:
        Path(output).write_text(inv.dumps(), encoding="utf-8")


def _interactive(record, inventory, discourse):
    def ask(item):
        click.echo(f"\nAmbiguity at {item.id} ('{item.site.word}', atoms {', '.join(item.labels)}):")
        for k, (cand, hint) in enumerate(item.hints, start=1):
            label = candidate_label(item.site, cand, inventory, discourse)
            click.echo(f"  {k}. {label} {_HINT_MARK.get(hint, '[?]')}")
        k = click.prompt("choose", type=click.IntRange(1, len(item.hints)))
        cand = item.hints[k - 1][0]
        record.append((item.id, cand))
        return cand
    return ask


def _choice_text(cand) -> str:
    if isinstance(cand, tuple):
        return cand[0]
    return str(cand)


@main.command("run")
@click.argument("text", type=click.Path(exists=True, dir_okay=False))
@click.option("--inventory", type=click.Path(exists=True, dir_okay=False), help="Inventory JSON from 'pao merge'.")
@click.option("-O", "--ontology", "ontologies", multiple=True, type=click.Path(exists=True, dir_okay=False),
              help="Micro-ontology file (repeatable); merged on the fly.")
@click.option("--templates", type=click.Path(exists=True, dir_okay=False), help="Procedural template file.")
@click.option("--choices", type=click.Path(exists=True, dir_okay=False), help="Recorded choices (site = candidate).")
@click.option("--interactive", is_flag=True, help="Prompt for every open ambiguity.")
@click.option("--record", type=click.Path(dir_okay=False), help="Save interactive answers as a choices file.")
@click.option("--trace-out", type=click.Path(dir_okay=False), help="Write the trace (.json, or .nq for quads).")
@click.option("--report", type=click.Path(dir_okay=False), help="Write the full report to a file as well.")
@click.option("--style", type=click.Choice(["narrative", "title"]), default="narrative", show_default=True)
@click.option("--property", "properties", multiple=True, help="Extra property verb known to the lexicon.")
@click.option("--no-check", is_flag=True, help="Skip the per-step consistency guard.")
@staged("run")
def run_cmd(text, inventory, ontologies, templates, choices, interactive, record, trace_out, report,
            style, properties, no_check):
    """Parse, disambiguate and execute a narrative text."""
    if choices and interactive:
        raise click.UsageError("--choices and --interactive are exclusive")
    with _tag("parse"):
        inv = load_inventory(inventory, ontologies)
        tpls = load_templates(templates) if templates else []
    check_universal(tpls, inv.merged_tbox)
    lexicon = build_lexicon(inv, tpls, properties)
    with _tag("parse"):
        discourse = parse_factual(Path(text).read_text(encoding="utf-8"), lexicon)
        recorded = parse_choices(Path(choices).read_text(encoding="utf-8")) if choices else {}
    answers = []
    callback = _interactive(answers, inv, discourse) if interactive else None
    with _tag("disambiguate"):
        result = disambiguate(discourse, inv, tpls, recorded, callback, strict=False)
    if record:
        Path(record).write_text("".join(f"{sid} = {_choice_text(c)}\n" for sid, c in answers),
                                encoding="utf-8")
    out = ["== Ambiguities ==", ambiguity_report(result.items, inv, discourse) or "(none)\n"]
    open_items = result.unresolved()
    if open_items:
        click.echo("".join(out), nl=False)
        from .errors import UnresolvedAmbiguity
        raise UnresolvedAmbiguity([i.id for i in open_items])
    out += ["== Paraphrase ==", render_labelled(result.atoms, lexicon, style)]
    out += ["== Resolved text ==", reemit_text(discourse, result.resolutions, lexicon, style) + "\n"]
    with _tag("execute"):
        execution = execute_atoms(result.atoms, tpls, inv.merged_tbox, check_consistency=not no_check)
    out += ["== Operations ==", execution.report()]
    out += ["== Trace ==", execution.trace.to_quads()]
    body = "\n".join(s.rstrip("\n") for s in out) + "\n"
    click.echo(body, nl=False)
    if report:
        Path(report).write_text(body, encoding="utf-8")
    if trace_out:
        data = execution.trace.to_quads() if trace_out.endswith((".nq", ".quads")) else execution.trace.dumps()
        Path(trace_out).write_text(data, encoding="utf-8")


def _load_trace(path: str) -> Trace:
    text = Path(path).read_text(encoding="utf-8")
    if text.lstrip().startswith("{"):
        return Trace.loads(text)
    return Trace.from_quads(text)


@main.command("query")
@click.argument("trace", type=click.Path(exists=True, dir_okay=False))
@click.argument("queries", type=click.Path(exists=True, dir_okay=False))
@click.option("--inventory", type=click.Path(exists=True, dir_okay=False), help="Inventory for subclass closure.")
@click.option("-O", "--ontology", "ontologies", multiple=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--json", "as_json", is_flag=True, help="Print answers as JSON.")
@staged("query")
def query_cmd(trace, queries, inventory, ontologies, as_json):
    """Answer WHERE-AT-STEP queries over a trace."""
    with _tag("parse"):
        tr = _load_trace(trace)
        qs = parse_queries(Path(queries).read_text(encoding="utf-8"))
    if len(tr) == 0:
        from .errors import ParseError
        raise ParseError("cannot query an empty trace")
    tbox = ()
    if inventory or ontologies:
        tbox = load_inventory(inventory, ontologies).merged_tbox
    answers = [evaluate(q, tr, tbox) for q in qs]
    if as_json:
        click.echo(answers_json(qs, answers))
        return
    for k, (q, a) in enumerate(zip(qs, answers), start=1):
        click.echo(f"{k}. {render_answer(q, a)}")


if __name__ == "__main__":
    main()
