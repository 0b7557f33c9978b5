"""
Text format for finite models::

    worlds: [w0,w1]
    actual: w0
    access: [[w0,w0],[w0,w1],[w1,w1]]
    spheres: {w0: [[w0],[w0,w1]], w1: [[w0],[w0,w1]]}
    val: {p: [w1]}

``actual`` defaults to the first world, ``access`` to the identity, ``spheres`` and ``val`` to
empty. Lines starting with ``%`` are comments.
"""
import logging
from typing import Dict, FrozenSet, List, Tuple

from lark import Lark, Transformer, UnexpectedInput

from semantics.models import FiniteModel, Neighbourhood
from syntax.errors import ModelFormatError
from syntax.parser import to_parse_error

logger = logging.getLogger(__name__)

MODEL_GRAMMAR = r"""
start: field*

field: "worlds" ":" world_list                                    -> worlds
     | "actual" ":" WORLD                                          -> actual
     | "access" ":" "[" [pair ("," pair)*] "]"                     -> access
     | "spheres" ":" "{" [sphere_entry ("," sphere_entry)*] "}"    -> spheres
     | "val" ":" "{" [val_entry ("," val_entry)*] "}"              -> val

world_list: "[" [WORLD ("," WORLD)*] "]"
pair: "[" WORLD "," WORLD "]"
sphere_entry: WORLD ":" "[" [world_list ("," world_list)*] "]"
val_entry: ATOM ":" world_list

WORLD: /[A-Za-z0-9_]+/
ATOM: /[a-z][a-z0-9_]*/
COMMENT: /%[^\n]*/

%import common.WS
%ignore WS
%ignore COMMENT
"""


def _present(items) -> list:
    return [item for item in items if item is not None]


class ModelTransformer(Transformer):

    def start(self, items):
        return items

    def world_list(self, items):
        return tuple(str(w) for w in _present(items))

    def pair(self, items):
        return (str(items[0]), str(items[1]))

    def sphere_entry(self, items):
        return (str(items[0]), tuple(frozenset(n) for n in _present(items[1:])))

    def val_entry(self, items):
        return (str(items[0]), frozenset(items[1]))

    def worlds(self, items):
        return ("worlds", items[0])

    def actual(self, items):
        return ("actual", str(items[0]))

    def access(self, items):
        return ("access", frozenset(_present(items)))

    def spheres(self, items):
        return ("spheres", dict(_present(items)))

    def val(self, items):
        return ("val", dict(_present(items)))


_parser = Lark(MODEL_GRAMMAR, parser="lalr", transformer=ModelTransformer())


def parse_model(text: str) -> FiniteModel:
    """
    Read a model from its text form.

    Raises:
        ParseError: On syntax errors.
        ModelFormatError: On missing or repeated fields and references to unknown worlds.
    """
    try:
        fields: List[Tuple[str, object]] = _parser.parse(text)
    except UnexpectedInput as e:
        raise to_parse_error(e, "model") from e

    values: Dict[str, object] = {}
    for name, value in fields:
        if name in values:
            raise ModelFormatError(f"field {name} given twice")
        values[name] = value
    if "worlds" not in values:
        raise ModelFormatError("field worlds is required")

    worlds: Tuple[str, ...] = values["worlds"]
    if len(set(worlds)) != len(worlds):
        raise ModelFormatError("duplicate world id")
    if not worlds:
        raise ModelFormatError("a model needs at least one world")
    known = set(worlds)

    actual = values.get("actual", worlds[0])
    access: FrozenSet[Tuple[str, str]] = values.get("access", frozenset((w, w) for w in worlds))
    spheres: Dict[str, Tuple[Neighbourhood, ...]] = values.get("spheres", {})
    valuation: Dict[str, FrozenSet[str]] = values.get("val", {})

    mentioned = {actual} | {w for pair in access for w in pair} | set(spheres)
    for system in spheres.values():
        for n in system:
            mentioned |= n
    for holds in valuation.values():
        mentioned |= holds
    unknown = sorted(mentioned - known)
    if unknown:
        raise ModelFormatError(f"unknown world {unknown[0]}")

    logger.debug("parsed model with %d worlds", len(worlds))
    return FiniteModel(
        worlds=worlds,
        actual=actual,
        access=frozenset(access),
        spheres=dict(spheres),
        valuation=dict(valuation),
    )


def _world_list(m: FiniteModel, worlds) -> str:
    order = {w: i for i, w in enumerate(m.worlds)}
    return "[" + ",".join(sorted(worlds, key=lambda w: order.get(w, len(order)))) + "]"


def format_model(m: FiniteModel) -> str:
    """Canonical text of ``m``, ending with a newline."""
    order = {w: i for i, w in enumerate(m.worlds)}
    pairs = sorted(m.access, key=lambda p: (order[p[0]], order[p[1]]))
    access = ",".join(f"[{u},{v}]" for u, v in pairs)
    spheres = ", ".join(
        f"{w}: [" + ",".join(_world_list(m, n) for n in m.sphere_system(w)) + "]"
        for w in m.worlds
        if w in m.spheres
    )
    val = ", ".join(f"{atom}: {_world_list(m, m.valuation[atom])}" for atom in sorted(m.valuation))
    return (
        f"worlds: {_world_list(m, m.worlds)}\n"
        f"actual: {m.actual}\n"
        f"access: [{access}]\n"
        f"spheres: {{{spheres}}}\n"
        f"val: {{{val}}}\n"
    )
