"""Synchronous correlations from projection families in matrix algebras.

A family of n-outcome PVMs f^1, ..., f^k in the d x d matrices defines a
correlation through the normalized trace, p(a, b | x, y) =
tr(f^x_a f^y_b) / d.  Such correlations are automatically synchronous
(same question, same answer) and symmetric under swapping the players.
The lower-bound search optimizes these families for a game objective; all
reported values are finite-dimensional lower bounds, since the search runs
over matrix algebras only and attainment there is not guaranteed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DefectTooLargeError, Report, ValidationError
from .game import Game, Strategy, game_value
from .linalg import dagger, frobenius, identity, jacobi_eigh, random_unitary
from .quantum import (PVM, MeasurementFamily, block_columns, climb_family,
                      family_from_unitary, validate_measurement)
from .rng import generator

REPAIR_DEFECT_CAP = 0.1


@dataclass(frozen=True, eq=False)
class TracialPVMFamily:
    """k families of n projections in a common matrix dimension d."""

    families: tuple[MeasurementFamily, ...]

    def __post_init__(self):
        families = tuple(self.families)
        if not families:
            raise ValidationError("need at least one question family")
        d = families[0].dim
        n = families[0].n_outcomes
        for x, fam in enumerate(families):
            if fam.flavor != PVM:
                raise ValidationError(f"family {x + 1} must be flavored '{PVM}'")
            if fam.dim != d or fam.n_outcomes != n:
                raise ValidationError(
                    f"family {x + 1} has shape (dim {fam.dim}, {fam.n_outcomes} outcomes), "
                    f"expected (dim {d}, {n} outcomes)")
        object.__setattr__(self, "families", families)

    @property
    def d(self) -> int:
        return self.families[0].dim

    @property
    def k(self) -> int:
        return len(self.families)

    @property
    def n(self) -> int:
        return self.families[0].n_outcomes


def validate_family(family: TracialPVMFamily, tol: float = 1e-9) -> Report:
    violations = []
    worst = 0.0
    for x, fam in enumerate(family.families):
        report = validate_measurement(fam, tol=tol)
        if not report.ok:
            worst = max(worst, report.worst)
            violations.extend(f"family {x + 1}: {v}" for v in report.violations)
    return Report(ok=not violations, violations=tuple(violations), worst=worst)


def tracial_correlation(family: TracialPVMFamily) -> Strategy:
    """Correlation p(a, b | x, y) = tr(f^x_a f^y_b) / d.

    The output is a valid synchronous strategy: orthogonality of the
    projections within one family kills the off-diagonal same-question
    mass, and cyclicity of the trace gives p(a, b | x, y) = p(b, a | y, x).
    """
    validate_family(family).raise_if_failed("tracial PVM family")
    k, n, d = family.k, family.n, family.d
    p = np.zeros((k, k, n, n))
    worst_imag = 0.0
    for x in range(k):
        for y in range(k):
            for a in range(n):
                fa = family.families[x].outcomes[a]
                for b in range(n):
                    val = complex(np.trace(fa @ family.families[y].outcomes[b])) / d
                    worst_imag = max(worst_imag, abs(val.imag))
                    p[x, y, a, b] = val.real
    if worst_imag > 1e-9:
        raise ValidationError(f"trace correlation has imaginary residual {worst_imag:.3g}")
    return Strategy(k=k, n=n, p=p)


def scalar_family(assignment: tuple[int, ...], n: int, d: int) -> TracialPVMFamily:
    """Deterministic synchronous family: question x answers assignment[x]
    with certainty (the identity sits on that outcome, zero elsewhere)."""
    eye = identity(d)
    zero = np.zeros((d, d), dtype=np.complex128)
    families = []
    for answer in assignment:
        if not 1 <= answer <= n:
            raise ValidationError(f"assignment value {answer} out of range [1..{n}]")
        families.append(MeasurementFamily(
            outcomes=tuple(eye if a == answer - 1 else zero for a in range(n)),
            flavor=PVM))
    return TracialPVMFamily(families=tuple(families))


def random_tracial_family(k: int, n: int, d: int, seed: int) -> TracialPVMFamily:
    """Test-corpus generator: each question family conjugates the near-equal
    coordinate block PVM by an independent random unitary."""
    rng = generator(seed)
    columns = block_columns(d, n)
    return TracialPVMFamily(families=tuple(
        family_from_unitary(random_unitary(d, rng), columns) for _ in range(k)))


def _best_scalar_assignment(game: Game) -> tuple[float, tuple[int, ...]] | None:
    """Exact best deterministic synchronous strategy (both players use the
    same answer function), or None when enumeration is too large."""
    k, n = game.k, game.n
    if n ** k > 1_000_000:
        return None
    import itertools
    best = (-np.inf, (1,) * k)
    for assignment in itertools.product(range(1, n + 1), repeat=k):
        value = 0.0
        for x in range(k):
            for y in range(k):
                value += game.pi[x, y] * game.wins[x, y, assignment[x] - 1, assignment[y] - 1]
        if value > best[0]:
            best = (value, assignment)
    return best


def _sync_objective(game: Game, mats: list[list[np.ndarray]], d: int) -> float:
    value = 0.0
    for x in range(game.k):
        for y in range(game.k):
            if game.pi[x, y] == 0.0:
                continue
            for a in range(game.n):
                for b in range(game.n):
                    if game.wins[x, y, a, b] != 0.0:
                        value += game.pi[x, y] * float(
                            np.real(np.trace(mats[x][a] @ mats[y][b]))) / d
    return value


def _sync_seesaw(game: Game, d: int, rng: np.random.Generator, iters: int,
                 moves: int) -> TracialPVMFamily:
    """One restart: round-robin hill-climbs of each family unitary against
    the trace objective with the other families held fixed.

    With the block profile fixed, the same-question terms tr(f^x_a f^x_b)
    are constants of the motion, so each climb sees a linear score."""
    k, n = game.k, game.n
    columns = block_columns(d, n)
    unitaries = [random_unitary(d, rng) for _ in range(k)]
    step0, step_min = 0.6, 2e-4
    decay = (step_min / step0) ** (1.0 / max(iters - 1, 1))
    for round_idx in range(iters):
        step = step0 * decay ** round_idx
        for x in range(k):
            others = [family_from_unitary(u, columns).outcomes for u in unitaries]
            weights = []
            for a in range(n):
                w = np.zeros((d, d), dtype=np.complex128)
                for y in range(k):
                    if y == x:
                        continue
                    for b in range(n):
                        coeff = (game.pi[x, y] * game.wins[x, y, a, b]
                                 + game.pi[y, x] * game.wins[y, x, b, a]) / d
                        if coeff != 0.0:
                            w += coeff * others[y][b]
                weights.append(w)
            unitaries[x], _ = climb_family(unitaries[x], columns, weights, rng, step, moves)
    return TracialPVMFamily(families=tuple(
        family_from_unitary(u, columns) for u in unitaries))


def sync_value_lower_bound(game: Game, dim: int, restarts: int, seed: int,
                           iters: int = 60, moves: int | None = None,
                           seed_scalar: bool = True,
                           threads: int = 1) -> tuple[float, TracialPVMFamily]:
    """Best tracial PVM family of dimension ``dim`` found by seeded
    restarts, with its exact value via tracial_correlation + game_value.

    Self-certifying like the entangled search; all outputs are
    finite-dimensional lower bounds on the synchronous entangled value.
    When ``seed_scalar`` is set, the best deterministic synchronous family
    joins the candidate pool.  Deterministic in ``seed``.
    """
    if dim < 1:
        raise ValidationError("matrix dimension must be >= 1")
    if restarts < 0 or iters < 1:
        raise ValidationError("restarts must be >= 0 and iters >= 1")
    if moves is None:
        moves = max(24, 6 * dim * game.n)
    candidates: list[TracialPVMFamily] = []
    if seed_scalar:
        best_scalar = _best_scalar_assignment(game)
        if best_scalar is not None:
            candidates.append(scalar_family(best_scalar[1], game.n, dim))

    def run_restart(index: int) -> TracialPVMFamily:
        rng = generator(seed, stream=index)
        return _sync_seesaw(game, dim, rng, iters, moves)

    if threads > 1 and restarts > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(max_workers=threads) as pool:
            candidates.extend(pool.map(run_restart, range(restarts)))
    else:
        candidates.extend(run_restart(r) for r in range(restarts))
    if not candidates:
        raise ValidationError("no candidates: need restarts >= 1 or a scalar seed")
    best_value = -np.inf
    best_family = candidates[0]
    for family in candidates:
        value = game_value(game, tracial_correlation(family))
        if value > best_value:
            best_value = value
            best_family = family
    return best_value, best_family


def repair_almost_pvm(mats) -> MeasurementFamily:
    """Project a family of near-projections with small defect onto a
    genuine PVM.

    Defect is the largest Frobenius norm among self-adjointness residuals
    f - f*, idempotence residuals f - f^2, and the completeness residual
    sum(f) - I; inputs with defect above 0.1 are rejected.  Construction:
    symmetrize each element, spread the completeness error uniformly to get
    score operators summing to the identity, diagonalize their index-
    weighted sum, and assign each eigenvector to the outcome whose score is
    largest.  The result is an exact PVM whose distance to the input is a
    small multiple of the defect.
    """
    from .linalg import as_complex
    elements = [as_complex(m) for m in mats]
    if not elements:
        raise ValidationError("need at least one near-projection")
    d = elements[0].shape[0]
    for i, mat in enumerate(elements):
        if mat.shape != (d, d):
            raise ValidationError(f"element {i + 1} is not {d} x {d}")
    n = len(elements)
    defect = max(
        max(frobenius(m - dagger(m)) for m in elements),
        max(frobenius(m - m @ m) for m in elements),
        frobenius(sum(elements) - identity(d)),
    )
    if defect > REPAIR_DEFECT_CAP:
        raise DefectTooLargeError(
            f"defect {defect:.3g} exceeds repair cap {REPAIR_DEFECT_CAP}")
    scores = [0.5 * (m + dagger(m)) for m in elements]
    correction = (identity(d) - sum(scores)) / n
    scores = [s + correction for s in scores]
    weighted = sum((a + 1) * scores[a] for a in range(n))
    _, vectors = jacobi_eigh(weighted)
    outcomes = [np.zeros((d, d), dtype=np.complex128) for _ in range(n)]
    for col in range(d):
        vec = vectors[:, col]
        gains = [float(np.real(np.vdot(vec, s @ vec))) for s in scores]
        outcomes[int(np.argmax(gains))] += np.outer(vec, vec.conj())
    return MeasurementFamily(outcomes=tuple(outcomes), flavor=PVM)
