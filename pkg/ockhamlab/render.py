"""
DOT rendering
Hasse diagrams drawn bottom to top: solid edges for covers, dashed edges
for the unary operation, doubled borders for points in a unary relation or
a generating set.
"""
import logging
from typing import Iterable, Optional, Sequence, Tuple, Union

import numpy as np
from pydotplus import graph_from_edges
from pydotplus.graphviz import Edge, Node

from .errors import MalformedInputError
from .morphisms import Morphism
from .structures import FinStructure, OckhamAlgebra, OckhamSpace, covers_of

logger = logging.getLogger(__name__)

# binary relations drawn as the order, first match wins
ORDER_NAMES = ("leq", "r")

Renderable = Union[OckhamSpace, OckhamAlgebra, FinStructure, Morphism]


def _graph():
    g = graph_from_edges([], directed=True)
    g.set_rankdir("BT")
    return g


def _matrix(size: int, pairs: Iterable[Tuple[int, int]]) -> np.ndarray:
    leq = np.zeros((size, size), dtype=bool)
    for x, y in pairs:
        leq[x, y] = True
    return leq


def _draw(size: int, labels: Sequence[str], leq: Optional[np.ndarray], arrows: Sequence[Tuple[str, Sequence[int]]],
          marked: Iterable[int] = (), extra: Sequence[Tuple[str, Iterable[Tuple[int, int]]]] = ()) -> str:
    g = _graph()
    marked = set(marked)
    for x in range(size):
        style = {"peripheries": 2} if x in marked else {}
        g.add_node(Node(str(x), label=f'"{labels[x]}"', **style))
    if leq is not None:
        for x, y in sorted((int(a), int(b)) for a, b in np.argwhere(covers_of(leq))):
            g.add_edge(Edge(str(x), str(y), dir="none"))
    for _, table in arrows:
        for x, y in enumerate(table):
            g.add_edge(Edge(str(x), str(y), style="dashed"))
    for name, pairs in extra:
        for x, y in sorted(pairs):
            if x != y:
                g.add_edge(Edge(str(x), str(y), style="dotted", label=f'"{name}"'))
    return g.to_string()


def render_dot(obj: Renderable, marked: Iterable[int] = ()) -> str:
    """
    DOT text for a space, algebra, structure or morphism.

    Args:
        marked: extra points to draw with a doubled border (a generating set)
    """
    if isinstance(obj, Morphism):
        return render_morphism(obj)
    if isinstance(obj, OckhamSpace):
        labels = [obj.label(x) for x in range(obj.size)]
        return _draw(obj.size, labels, obj.leq, [("g", obj.g)], marked)
    if isinstance(obj, OckhamAlgebra):
        labels = [obj.label(x) for x in range(obj.size)]
        return _draw(obj.size, labels, obj.leq, [("neg", obj.neg)], marked)
    if isinstance(obj, FinStructure):
        labels = [obj.label(x) for x in range(obj.size)]
        binary = [name for name, arity in obj.signature.rels if arity == 2]
        order = next((name for name in ORDER_NAMES if name in binary), None)
        leq = _matrix(obj.size, obj.rels[order]) if order else None
        unary = set(marked)
        for name, arity in obj.signature.rels:
            if arity == 1:
                unary |= {t[0] for t in obj.rels[name]}
        extra = [(name, obj.rels[name]) for name in binary if name != order]
        return _draw(obj.size, labels, leq, [(name, obj.ops[name]) for name in obj.signature.op_names],
                     unary, extra)
    raise MalformedInputError(f"Cannot render {type(obj).__name__}")


def render_morphism(phi: Morphism) -> str:
    """The source diagram with each point labelled by its image"""
    source = phi.source
    target = phi.target
    labels = [f"{source.label(x)} -> {target.label(y)}" for x, y in enumerate(phi.map)]
    if isinstance(source, OckhamSpace):
        return _draw(source.size, labels, source.leq, [("g", source.g)])
    S = source.as_structure()
    return render_dot(S.with_labels(labels))
