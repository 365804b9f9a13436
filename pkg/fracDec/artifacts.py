# -*- coding: utf-8 -*-
"""
JSON and CSV artifacts. Rationals are written as "numerator/denominator", integers beyond 64 bits and Decimal
diagnostics as decimal strings, and every artifact carries a meta block naming the tool, its version, the
config digest, the seed and the random generator.
"""
import csv
import enum
import io
import os
from decimal import Decimal
from fractions import Fraction
from typing import Any, Dict, List, Mapping, Optional, Union

import orjson
from fracDec import __version__
from fracDec.errorhandling import InputError
from fracDec.helpers import format_rational, parse_rational
from fracDec.hypercore import Hypergraph, Matching, build_graph, build_matching, generate
from fracDec.models.families import FamilyTypes
from fracDec.models.lp import Certificate, LPInstance
from fracDec.models.reports import BoundaryReport, DeficiencyReport
from fracDec.packing import ExplicitPacking, PackingView
from fracDec.utils.constants import DEFAULT_MATERIALIZE_LIMIT, MC_GENERATOR, TOOL_NAME
from pydantic import BaseModel

_INT64 = 2**63


def to_jsonable(value: Any) -> Any:
    """
    Converts domain values into orjson-serializable ones.
    """
    if isinstance(value, bool) or value is None or isinstance(value, (str, float)):
        return value
    if isinstance(value, int):
        return value if -_INT64 <= value < _INT64 else str(value)
    if isinstance(value, Fraction):
        return format_rational(value)
    if isinstance(value, Decimal):
        return str(value)
    if isinstance(value, enum.Enum):
        return getattr(value, "readable_name", value.name)
    if isinstance(value, Hypergraph):
        return graph_to_json(value)
    if isinstance(value, PackingView):
        return packing_summary(value)
    if isinstance(value, BaseModel):
        return {key: to_jsonable(getattr(value, key)) for key in value.__fields__}
    if isinstance(value, Mapping):
        return {str(to_jsonable(key)): to_jsonable(item) for key, item in value.items()}
    if isinstance(value, (list, tuple, set, frozenset)):
        items = sorted(value) if isinstance(value, (set, frozenset)) else value
        return [to_jsonable(item) for item in items]
    raise InputError(f"cannot serialize {type(value).__name__}")


def meta_block(digest: Optional[str] = None, seed: Optional[int] = None) -> Dict[str, Any]:
    return {
        "tool": TOOL_NAME,
        "version": __version__,
        "config_digest": digest,
        "seed": seed,
        "generator": MC_GENERATOR,
    }


def dumps(payload: Any, meta: Optional[Dict[str, Any]] = None) -> bytes:
    body = to_jsonable(payload)
    if meta is not None:
        body = {"meta": meta, **body} if isinstance(body, dict) else {"meta": meta, "data": body}
    return orjson.dumps(body, option=orjson.OPT_SORT_KEYS | orjson.OPT_INDENT_2)


def read_json(source: Union[str, Mapping, List]) -> Any:
    """
    Parameters:
        source: path of a JSON file, or an already parsed document
    Raises:
        InputError: the file is missing or not JSON
    """
    if not isinstance(source, str):
        return source
    try:
        with open(source, "rb") as fp:
            return orjson.loads(fp.read())
    except (OSError, orjson.JSONDecodeError) as ex:
        raise InputError(f"cannot read JSON from {source}: {ex}") from ex


def write_bytes(path: str, content: bytes) -> str:
    folder = os.path.dirname(path)
    if folder:
        os.makedirs(folder, exist_ok=True)
    with open(path, "wb") as fp:
        fp.write(content)
    return path


def graph_to_json(G: Hypergraph) -> Dict[str, Any]:
    return {"n": G.n, "r": G.r, "edges": [list(edge) for edge in G.edges]}


def load_graph(source: Union[str, Mapping]) -> Hypergraph:
    """
    Explicit {"n", "r", "edges"} or generator shorthand {"gen", "n", "r", ...}.

    Raises:
        InputError: malformed document
    """
    data = read_json(source)
    if not isinstance(data, Mapping):
        raise InputError("graph document must be a JSON object")
    if "gen" in data:
        return generate(data)
    try:
        return build_graph(int(data["n"]), int(data["r"]), data["edges"])
    except (KeyError, TypeError, ValueError) as ex:
        raise InputError(f"graph document needs n, r and edges: {ex}") from ex


def load_matching(source: Union[str, Mapping, List], n: int, r: int) -> Matching:
    """
    A list of edges, or {"matching": [...]}.
    """
    data = read_json(source)
    if isinstance(data, Mapping):
        data = data.get("matching", [])
    return build_matching(n, r, data)


def packing_to_json(P: PackingView, limit: int = DEFAULT_MATERIALIZE_LIMIT) -> Dict[str, Any]:
    explicit = P.materialize(limit)
    return {
        "host": graph_to_json(P.host),
        "family": P.family.readable_name,
        "order": P.order,
        "entries": [
            {"vertices": list(element), "weight": format_rational(value)} for element, value in explicit.support()
        ],
    }


def packing_summary(P: PackingView) -> Dict[str, Any]:
    return {"host": repr(P.host), "family": P.family.readable_name, "order": P.order, "support": P.support_bound}


def load_packing(source: Union[str, Mapping]) -> ExplicitPacking:
    """
    Raises:
        InputError: malformed document, negative weights or elements that are not cliques of the host
    """
    data = read_json(source)
    try:
        host = load_graph(data["host"])
        entries = {
            tuple(int(v) for v in item["vertices"]): parse_rational(item["weight"]) for item in data["entries"]
        }
    except (KeyError, TypeError, ValueError) as ex:
        raise InputError(f"packing document needs host and entries: {ex}") from ex
    family = FamilyTypes.clique
    for member in FamilyTypes:
        if data.get("family") in (member.readable_name, member.name):
            family = member
    return ExplicitPacking(host, family, entries, order=data.get("order"))


def load_targets(source: Union[str, Mapping, List]) -> Dict[Any, Fraction]:
    """
    [{"edge": [..], "value": "a/b"}, ...], optionally as {"targets": [...], "default": "a/b"}; the default is
    returned under the key None.
    """
    data = read_json(source)
    default = None
    if isinstance(data, Mapping):
        default = data.get("default")
        data = data.get("targets", [])
    try:
        targets: Dict[Any, Fraction] = {
            tuple(int(v) for v in item["edge"]): parse_rational(item["value"]) for item in data
        }
    except (KeyError, TypeError, ValueError) as ex:
        raise InputError(f"targets need edge and value: {ex}") from ex
    if default is not None:
        targets[None] = parse_rational(default)
    return targets


def certificate_to_json(L: LPInstance, c: Certificate) -> Dict[str, Any]:
    return {
        "kind": c.kind,
        "shape": list(L.shape),
        "rows": [to_jsonable(row) for row in L.rows],
        "cols": [to_jsonable(col) for col in L.cols],
        "solution": {str(j): format_rational(value) for j, value in sorted(c.solution.items())},
        "farkas": {str(i): format_rational(value) for i, value in sorted(c.farkas.items())},
        "pivots": c.pivots,
    }


def load_certificate(source: Union[str, Mapping]) -> Certificate:
    """
    Raises:
        InputError: malformed certificate
    """
    data = read_json(source)
    try:
        return Certificate(
            kind=data["kind"],
            solution={int(j): parse_rational(value) for j, value in data.get("solution", {}).items()},
            farkas={int(i): parse_rational(value) for i, value in data.get("farkas", {}).items()},
            pivots=int(data.get("pivots", 0)),
        )
    except (KeyError, TypeError, ValueError) as ex:
        raise InputError(f"malformed certificate: {ex}") from ex


def _csv(header: List[str], rows: List[List[Any]], meta: Optional[Dict[str, Any]]) -> bytes:
    buffer = io.StringIO()
    if meta is not None:
        buffer.write("# meta " + orjson.dumps(meta, option=orjson.OPT_SORT_KEYS).decode() + "\n")
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue().encode()


def boundary_csv(report: BoundaryReport, meta: Optional[Dict[str, Any]] = None) -> bytes:
    rows = [[rank, value.numerator, value.denominator] for rank, value in sorted(report.per_edge.items())]
    return _csv(["edge_rank", "numerator", "denominator"], rows, meta)


def deficiency_csv(report: DeficiencyReport, meta: Optional[Dict[str, Any]] = None) -> bytes:
    """
    One row per orbit of edges, or per edge when the report carries per-edge values.
    """
    if report.per_edge_eta:
        rows = [[rank, value.numerator, value.denominator] for rank, value in sorted(report.per_edge_eta.items())]
        return _csv(["edge_rank", "numerator", "denominator"], rows, meta)
    rows = [
        [
            " ".join(str(size) for size in record.signature[0]),
            record.signature[1],
            " ".join(str(v) for v in record.representative),
            record.eta.numerator,
            record.eta.denominator,
        ]
        for record in report.classes
    ]
    return _csv(["matched_sizes", "free", "representative", "numerator", "denominator"], rows, meta)

