"""
Bounded countermodel search and the validity oracle built on it.

Premises are global: a candidate model is considered only if every premise holds at every
world. Hypotheses and the goal are local to the candidate world.
"""
import logging
from collections import deque
from concurrent.futures import Future, ProcessPoolExecutor
from itertools import islice
from typing import Deque, Iterable, Iterator, List, Optional, Sequence, Tuple

from decide.enumeration import DEFAULT_BOUNDS, ModelBounds, enumerate_models
from semantics.evaluator import Evaluator
from semantics.models import EvalPoint, FiniteModel
from syntax.errors import CharacteristicMismatch, NonSentence
from syntax.formulas import Characteristic, Formula, characteristic, format_formula, is_sentence

logger = logging.getLogger(__name__)

Witness = Tuple[FiniteModel, str]

CHUNK_SIZE = 256
IN_FLIGHT = 2


def _require_sentences(formulas: Iterable[Formula]) -> None:
    for f in formulas:
        if not is_sentence(f):
            raise NonSentence(f"{format_formula(f)} is not a sentence")
        if characteristic(f) is not Characteristic.FN:
            raise CharacteristicMismatch(f"{format_formula(f)} is not an Fn formula")


def refuting_world(
    m: FiniteModel,
    hyps: Sequence[Formula],
    goal: Formula,
    premises: Sequence[Formula] = (),
    classical: bool = False,
) -> Optional[str]:
    """First world of ``m`` satisfying ``hyps`` but not ``goal``, given the premises hold globally."""
    ev = Evaluator(m, classical=classical)
    for p in premises:
        if not all(ev.holds(EvalPoint(w), p) for w in m.worlds):
            return None
    for w in m.worlds:
        point = EvalPoint(w)
        if all(ev.holds(point, h) for h in hyps) and not ev.holds(point, goal):
            return w
    return None


def _search_chunk(args) -> Optional[Tuple[int, str]]:
    models, hyps, goal, premises, classical = args
    for position, m in enumerate(models):
        w = refuting_world(m, hyps, goal, premises, classical)
        if w is not None:
            return position, w
    return None


def _chunks(models: Iterator[FiniteModel], size: int) -> Iterator[List[FiniteModel]]:
    while True:
        chunk = list(islice(models, size))
        if not chunk:
            return
        yield chunk


def countermodel(
    hyps: Sequence[Formula],
    goal: Formula,
    bounds: ModelBounds = DEFAULT_BOUNDS,
    premises: Sequence[Formula] = (),
    workers: int = 1,
) -> Optional[Witness]:
    """
    Search the bounded model space for a refutation of ``hyps ⊨ goal``.

    Args:
        hyps: Sentences that must hold at the refuting world.
        goal: The sentence that must fail there.
        bounds: Enumeration limits.
        premises: Sentences that must hold at every world of the model.
        workers: Worker processes; the answer does not depend on it.

    Returns:
        ``(model, world)`` for the first refutation in enumeration order, with the model's
        distinguished world moved to ``world``; None if the bounds hold no countermodel.

    Raises:
        NonSentence: If an input has variables or neighbourhood atoms.
        CharacteristicMismatch: If an input is not an Fn formula.
    """
    hyps, premises = tuple(hyps), tuple(premises)
    _require_sentences(hyps + premises + (goal,))
    classical = bounds.classical
    models = enumerate_models(bounds)

    if workers <= 1:
        for m in models:
            w = refuting_world(m, hyps, goal, premises, classical)
            if w is not None:
                logger.info("countermodel found with %d worlds", len(m.worlds))
                return m.with_actual(w), w
        logger.info("no countermodel within bounds")
        return None

    # At most IN_FLIGHT chunks per worker are queued; results are read in enumeration order,
    # so the first hit matches the sequential search.
    chunks = _chunks(models, CHUNK_SIZE)
    with ProcessPoolExecutor(max_workers=workers) as pool:
        pending: Deque[Tuple[List[FiniteModel], Future]] = deque()

        def submit_next() -> None:
            chunk = next(chunks, None)
            if chunk is not None:
                pending.append((chunk, pool.submit(_search_chunk, (chunk, hyps, goal, premises, classical))))

        for _ in range(workers * IN_FLIGHT):
            submit_next()
        while pending:
            chunk, future = pending.popleft()
            hit = future.result()
            if hit is not None:
                for _, other in pending:
                    other.cancel()
                position, w = hit
                logger.info("countermodel found with %d worlds", len(chunk[position].worlds))
                return chunk[position].with_actual(w), w
            submit_next()
    logger.info("no countermodel within bounds")
    return None


def oracle_entails(
    hyps: Sequence[Formula],
    goal: Formula,
    bounds: ModelBounds = DEFAULT_BOUNDS,
    premises: Sequence[Formula] = (),
    workers: int = 1,
) -> bool:
    """True iff no model within ``bounds`` refutes the entailment. Never a validity proof."""
    return countermodel(hyps, goal, bounds, premises, workers) is None
