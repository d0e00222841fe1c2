"""Command line front end.

Every command reads one space document (a file argument, or stdin with
``--stdio``) and writes one JSON report to stdout.  Exit status is 0 when
every verdict holds, 1 when a verification fails, 2 on bad input.
"""

from __future__ import annotations

import functools
import hashlib
import json
import os
import sys
from importlib import resources

import click
import jsonschema

from . import generators
from .errors import InvalidInput, ProtoshapeError, TooLarge
from .homology import HomologyGroups, simplicial_homology
from .hypercover import cech_hypercover, gamma, mccord_hypercover, verify_hyper
from .proset import constant_value, pi_proset
from .simplicial import cech_nerve, order_complex
from .space import (
    FiniteSpace,
    OpenCover,
    Preorder,
    connected_components,
    enumerate_open_partitions,
    minimal_cover,
    refines,
    space_from_preorder,
    specialization_preorder,
    validate_topology,
)

FORMAT_VERSION = "1"
ADMISSIBILITY = "all-covers"
DEFAULT_MAX_POINTS = 12
# Part(X) and its refinement order grow like the Bell numbers of the component count
MAX_PARTITIONS = 1000


@functools.lru_cache(maxsize=None)
def load_schema(name: str) -> dict:
    text = resources.files("protoshape").joinpath("schemas").joinpath(f"{name}.schema.json").read_text()
    return json.loads(text)


def _validate(doc, schema_name: str) -> None:
    validator = jsonschema.Draft202012Validator(load_schema(schema_name))
    errors = sorted(validator.iter_errors(doc), key=lambda e: list(e.absolute_path))
    if errors:
        e = errors[0]
        raise InvalidInput(
            f"{schema_name}: {e.message}",
            witness={"path": [str(p) for p in e.absolute_path]},
        )


def canonical_json(doc) -> str:
    return json.dumps(doc, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def digest(doc) -> str:
    return "sha256:" + hashlib.sha256(canonical_json(doc).encode()).hexdigest()


def parse_space(doc) -> FiniteSpace:
    """Build the space described by a SpaceDocument."""
    _validate(doc, "space_document")
    points = doc["points"]
    if "opens" in doc:
        return validate_topology(points, doc["opens"])
    if "min_open" in doc:
        extra = sorted(set(doc["min_open"]) - set(points))
        if extra:
            raise InvalidInput(f"min_open given for unknown points {extra}")
        return FiniteSpace.from_min_open(points, doc["min_open"])
    known = set(points)
    for x, y in doc["preorder"]:
        if x not in known or y not in known:
            raise InvalidInput(f"preorder pair ({x}, {y}) mentions an unknown point")
    return space_from_preorder(Preorder.from_pairs(points, [tuple(p) for p in doc["preorder"]]))


def space_document(space: FiniteSpace, name: str | None = None) -> dict:
    doc = {"format_version": FORMAT_VERSION}
    if name is not None:
        doc["name"] = name
    doc["points"] = list(space.points)
    doc["min_open"] = {p: list(space.subset(m)) for p, m in zip(space.points, space.masks)}
    return doc


def parse_cover(doc, space: FiniteSpace) -> OpenCover:
    _validate(doc, "cover_document")
    return OpenCover.from_sets(space, doc["cover"], doc.get("labels"))


def max_points() -> int:
    raw = os.environ.get("PROTOSHAPE_MAX_POINTS", str(DEFAULT_MAX_POINTS))
    try:
        value = int(raw)
    except ValueError:
        raise InvalidInput(f"PROTOSHAPE_MAX_POINTS={raw!r} is not an integer") from None
    if value < 1:
        raise InvalidInput("PROTOSHAPE_MAX_POINTS must be positive")
    return value


def _require_size(space: FiniteSpace) -> None:
    cap = max_points()
    if space.size > cap:
        raise TooLarge(
            f"{space.size} points exceeds PROTOSHAPE_MAX_POINTS={cap}",
            witness={"points": space.size, "limit": cap},
        )


# -- signatures ----------------------------------------------------------------


def _cell_counts(s) -> dict:
    return {
        "all": [int(n) for n in s.sizes],
        "nondegenerate": [len(s.nondegenerate(n)) for n in range(s.depth + 1)],
    }


def mccord_signature(space: FiniteSpace, max_degree: int):
    k = order_complex(specialization_preorder(space), max_degree + 1)
    return k, simplicial_homology(k, max_degree)


def nerve_signature(cover: OpenCover, max_degree: int):
    n = cech_nerve(cover, max_degree + 1)
    return n, simplicial_homology(n, max_degree)


def qsh_signature(space: FiniteSpace, max_degree: int):
    g = gamma(mccord_hypercover(space, max_degree + 1))
    return g, simplicial_homology(g, max_degree)


def _group(h: HomologyGroups, n: int) -> dict:
    return {"betti": h.betti[n], "torsion": list(h.torsion[n])}


# -- reports ---------------------------------------------------------------------


def _report(command: str, doc, space: FiniteSpace | None, **body) -> dict:
    out = {
        "format_version": FORMAT_VERSION,
        "command": command,
        "input_digest": digest(doc),
        "admissibility": ADMISSIBILITY,
    }
    if space is not None:
        out["space"] = {
            "points": list(space.points),
            "min_open": {p: list(space.subset(m)) for p, m in zip(space.points, space.masks)},
        }
    out.update(body)
    out["ok"] = all(v["holds"] for v in out.get("verdicts", []) if not v.get("informational"))
    out.setdefault("verdicts", [])
    return out


def _verdict(name: str, holds: bool, note: str | None = None, witness=None,
             informational: bool = False) -> dict:
    v = {"name": name, "holds": bool(holds)}
    if informational:
        v["informational"] = True
    if note:
        v["note"] = note
    if witness is not None:
        v["witness"] = witness
    return v


def run_validate(doc) -> dict:
    try:
        space = parse_space(doc)
    except InvalidInput:
        raise
    except ProtoshapeError as exc:
        return _report("validate", doc, None, verdicts=[
            _verdict("topology-axioms", False, note=f"{exc.code}: {exc}", witness=exc.witness)
        ])
    return _report("validate", doc, space, verdicts=[_verdict("topology-axioms", True)])


def run_analyze(doc) -> dict:
    space = parse_space(doc)
    _require_size(space)
    pre = specialization_preorder(space)
    comps = connected_components(space)
    n_comp = len(comps)
    if _bell(n_comp) > MAX_PARTITIONS:
        raise TooLarge(
            f"{n_comp} components give {_bell(n_comp)} open partitions (limit {MAX_PARTITIONS})",
            witness={"components": n_comp},
        )
    parts = enumerate_open_partitions(space, max_points())
    finest = [p for p in parts if all(refines(p, q) for q in parts)]
    pi0 = [p for p in finest if p.blocks() == comps.blocks()]
    value = constant_value(pi_proset(space, max_points()))
    value_blocks = sorted(sorted(b) for b in value.value)
    comp_blocks = sorted(sorted(b) for b in comps.blocks())
    analysis = {
        "strict_pairs": [list(p) for p in pre.strict_pairs()],
        "partial_order": pre.is_partial_order(),
        "components": [list(space.subset(m)) for m in comps.members],
        "open_partitions": len(parts),
        "constant_value": value_blocks,
        "cofinal": value.cofinal,
    }
    verdicts = [
        _verdict("finest-open-partition-is-components", len(pi0) == 1,
                 witness=None if pi0 else {"finest": [[sorted(b) for b in p.blocks()] for p in finest]}),
        _verdict("pi-proset-constant-on-components", value_blocks == comp_blocks and value.cofinal,
                 witness=None if value_blocks == comp_blocks else {"value": value_blocks}),
    ]
    return _report("analyze", doc, space, analysis=analysis, verdicts=verdicts)


def _bell(n: int) -> int:
    row = [1]
    for _ in range(n):
        nxt = [row[-1]]
        for v in row:
            nxt.append(nxt[-1] + v)
        row = nxt
    return row[0]


def run_mccord(doc, max_degree: int) -> dict:
    space = parse_space(doc)
    _require_size(space)
    k, h = mccord_signature(space, max_degree)
    return _report("mccord", doc, space, max_degree=max_degree, depth=max_degree + 1,
                   cells={"mccord": _cell_counts(k)}, homology={"mccord": h.as_table()})


def run_nerve(doc, max_degree: int, cover_doc) -> dict:
    space = parse_space(doc)
    _require_size(space)
    if cover_doc is None:
        cover = minimal_cover(space)
        source = "finest"
    else:
        cover = parse_cover(cover_doc, space)
        source = "file"
    n, h = nerve_signature(cover, max_degree)
    cover_info = {
        "source": source,
        "members": {cover.label(k): list(space.subset(m)) for k, m in enumerate(cover.members)},
    }
    if cover_doc is not None:
        cover_info["digest"] = digest(cover_doc)
    return _report("nerve", doc, space, max_degree=max_degree, depth=max_degree + 1, cover=cover_info,
                   cells={"nerve": _cell_counts(n)}, homology={"nerve": h.as_table()})


def run_shape(doc, max_degree: int) -> dict:
    space = parse_space(doc)
    _require_size(space)
    n, h = nerve_signature(minimal_cover(space), max_degree)
    return _report(
        "shape", doc, space, max_degree=max_degree, depth=max_degree + 1,
        cells={"shape": _cell_counts(n)}, homology={"shape": h.as_table()},
        verdicts=[_verdict(
            "finest-cover-is-cofinal", True,
            note="the cover by minimal open sets refines every open cover, so its nerve computes the shape",
        )],
    )


def run_qsh(doc, max_degree: int) -> dict:
    space = parse_space(doc)
    _require_size(space)
    g, h = qsh_signature(space, max_degree)
    return _report("qsh", doc, space, max_degree=max_degree, depth=max_degree + 1,
                   cells={"qsh": _cell_counts(g)}, homology={"qsh": h.as_table()})


def run_compare(doc, max_degree: int) -> dict:
    space = parse_space(doc)
    _require_size(space)
    k, hm = mccord_signature(space, max_degree)
    n, hs = nerve_signature(minimal_cover(space), max_degree)
    g, hq = qsh_signature(space, max_degree)
    table = [
        {"degree": d, "mccord": _group(hm, d), "shape": _group(hs, d), "qsh": _group(hq, d)}
        for d in range(max_degree + 1)
    ]
    differ = [row["degree"] for row in table if row["qsh"] != row["mccord"]]
    shape_differ = [row["degree"] for row in table if row["shape"] != row["qsh"]]
    verdicts = [
        _verdict("qsh=mccord", not differ, witness={"degrees": differ} if differ else None),
        # shape and qsh may legitimately disagree, so this one never fails the run
        _verdict(
            "shape=qsh", not shape_differ, informational=True,
            note=None if not shape_differ else f"shape differs from qsh in degrees {shape_differ}",
            witness={"degrees": shape_differ} if shape_differ else None,
        ),
    ]
    return _report(
        "compare", doc, space, max_degree=max_degree, depth=max_degree + 1,
        cells={"mccord": _cell_counts(k), "shape": _cell_counts(n), "qsh": _cell_counts(g)},
        homology={"mccord": hm.as_table(), "shape": hs.as_table(), "qsh": hq.as_table()},
        comparison=table, verdicts=verdicts,
    )


def run_hypercheck(doc, kind: str, depth: int, cover_doc=None) -> dict:
    space = parse_space(doc)
    _require_size(space)
    if depth < 0:
        raise InvalidInput("depth must be non-negative")
    if kind == "cech":
        cover = minimal_cover(space) if cover_doc is None else parse_cover(cover_doc, space)
        h = cech_hypercover(cover, depth)
    elif kind == "mccord":
        if cover_doc is not None:
            raise InvalidInput("--cover only applies to --kind cech")
        h = mccord_hypercover(space, depth)
    else:
        raise InvalidInput(f"unknown hypercover kind {kind!r}")
    rep = verify_hyper(h)
    failing = [lv.as_dict() for lv in rep.levels if not lv.covering]
    witness = failing[0] if failing else (rep.base_witness if not rep.covers_base else None)
    if rep.simplicial_identities or rep.inclusions:
        witness = {"simplicial_identities": rep.simplicial_identities, "inclusions": rep.inclusions}
    return _report("hypercheck", doc, space, depth=depth, hyper=rep.as_dict(),
                   verdicts=[_verdict("hypercovering", rep.ok, witness=witness)])


# -- click wiring --------------------------------------------------------------------


def _emit(doc: dict) -> None:
    click.echo(json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False))


def _read_json(path: str | None, stdio: bool, what: str):
    if stdio and path not in (None, "-"):
        raise InvalidInput("give either a file or --stdio, not both")
    if path is None and not stdio:
        raise InvalidInput(f"no {what} given (pass a file or --stdio)")
    try:
        if stdio or path == "-":
            text = sys.stdin.read()
        else:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
        return json.loads(text)
    except OSError as exc:
        raise InvalidInput(f"cannot read {what}: {exc.strerror}", witness={"path": path}) from None
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"{what} is not JSON: {exc.msg}",
                           witness={"line": exc.lineno, "column": exc.colno}) from None


def _run(command: str, producer) -> None:
    try:
        report = producer()
    except ProtoshapeError as exc:
        _emit({
            "format_version": FORMAT_VERSION,
            "command": command,
            "error": {"code": exc.code, "message": str(exc), "witness": _plain(exc.witness)},
        })
        sys.exit(2)
    _emit(report)
    sys.exit(0 if report.get("ok", True) else 1)


def _plain(value):
    return json.loads(json.dumps(value, default=str)) if value is not None else None


space_arg = click.argument("space_file", required=False, type=click.Path(dir_okay=False, allow_dash=True))
stdio_opt = click.option("--stdio", is_flag=True, help="Read the space document from stdin.")
degree_opt = click.option("--max-degree", default=2, show_default=True, type=click.IntRange(min=0),
                          help="Highest homology degree; complexes are built one degree deeper.")


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.version_option(package_name="artifact")
def main():
    """Homotopy invariants of finite topological spaces."""


@main.command()
@space_arg
@stdio_opt
def validate(space_file, stdio):
    """Check the topology axioms."""
    _run("validate", lambda: run_validate(_read_json(space_file, stdio, "space document")))


@main.command()
@space_arg
@stdio_opt
def analyze(space_file, stdio):
    """Specialization preorder, components and open partitions."""
    _run("analyze", lambda: run_analyze(_read_json(space_file, stdio, "space document")))


@main.command()
@space_arg
@stdio_opt
@degree_opt
def mccord(space_file, stdio, max_degree):
    """Cell counts and homology of the order complex."""
    _run("mccord", lambda: run_mccord(_read_json(space_file, stdio, "space document"), max_degree))


@main.command()
@space_arg
@stdio_opt
@degree_opt
@click.option("--cover", "cover", default="finest", show_default=True,
              help="Cover document file, or 'finest' for the minimal open sets.")
def nerve(space_file, stdio, max_degree, cover):
    """Homology of the nerve of an open cover."""
    def produce():
        doc = _read_json(space_file, stdio, "space document")
        cover_doc = None if cover == "finest" else _read_json(cover, False, "cover document")
        return run_nerve(doc, max_degree, cover_doc)
    _run("nerve", produce)


@main.command()
@space_arg
@stdio_opt
@degree_opt
def shape(space_file, stdio, max_degree):
    """Homology of the nerve of the finest open cover."""
    _run("shape", lambda: run_shape(_read_json(space_file, stdio, "space document"), max_degree))


@main.command()
@space_arg
@stdio_opt
@degree_opt
def qsh(space_file, stdio, max_degree):
    """Homology of the component complex of the McCord hypercovering."""
    _run("qsh", lambda: run_qsh(_read_json(space_file, stdio, "space document"), max_degree))


@main.command()
@space_arg
@stdio_opt
@degree_opt
def compare(space_file, stdio, max_degree):
    """McCord, shape and qsh homology side by side."""
    _run("compare", lambda: run_compare(_read_json(space_file, stdio, "space document"), max_degree))


@main.command()
@space_arg
@stdio_opt
@click.option("--kind", type=click.Choice(["cech", "mccord"]), default="cech", show_default=True)
@click.option("--depth", default=3, show_default=True, type=click.IntRange(min=0))
@click.option("--cover", "cover", default="finest", show_default=True,
              help="Cover document for --kind cech, or 'finest'.")
def hypercheck(space_file, stdio, kind, depth, cover):
    """Verify the hypercovering conditions level by level."""
    def produce():
        doc = _read_json(space_file, stdio, "space document")
        cover_doc = None if cover == "finest" else _read_json(cover, False, "cover document")
        return run_hypercheck(doc, kind, depth, cover_doc)
    _run("hypercheck", produce)


@main.command()
@click.option("--name", required=True,
              help="4circle | sierpinski | discrete:n | sphere:n | random:seed,n")
def generate(name):
    """Print a builtin space as a space document."""
    def produce():
        space = generators.by_name(name)
        _require_size(space)
        return space_document(space, name)
    _run("generate", produce)


if __name__ == "__main__":
    main()
