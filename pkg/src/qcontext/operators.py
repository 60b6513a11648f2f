"""Operator representations of the fundamental pair and observable calculus.

In the b-basis the variable b acts by multiplication, diag(b1, b2).  With a
doubly stochastic transition matrix the variable a is represented by the real
symmetric matrix obtained by rotating diag(a1, a2) with the orthogonal basis
change (q1, q2), (-q2, q1), q_i being square roots of transition
probabilities.  The two operators never commute for genuinely incompatible
pairs with distinct values.

Quantum means of f(a-op) + g(b-op) match the exact conditional expectations
of f(a) + g(b) on all represented contexts; probability *distributions* match
only for pure functions of a single variable.  Eigendecompositions use the
closed-form 2x2 quadratic, not an iterative solver.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Mapping

from .errors import NotDoubleStochasticError, ZeroConditionError
from .hilbert import (
    SignConvention,
    StateVector,
    TransitionMatrix,
    a_basis,
    amplitude,
    context_basis,
    extend_to_cells,
    is_double_stochastic,
    mappable_contexts,
    phase_normalized,
    transition_matrix,
)
from .prob import (
    DichotomousVariable,
    Event,
    FiniteProbabilitySpace,
    all_events,
    as_fraction,
    probability,
)

HERMITIAN_TOL = 1e-12

Matrix = tuple[tuple[complex, complex], tuple[complex, complex]]


@dataclass(frozen=True)
class HermitianOperator:
    """A 2x2 complex matrix equal to its conjugate transpose, expressed in
    the b-basis."""

    entries: Matrix
    basis: str = "b"

    def __post_init__(self) -> None:
        e = self.entries
        if (
            abs(e[0][0].imag) > HERMITIAN_TOL
            or abs(e[1][1].imag) > HERMITIAN_TOL
            or abs(e[0][1] - e[1][0].conjugate()) > HERMITIAN_TOL
        ):
            raise ValueError("matrix is not Hermitian within tolerance")

    def apply(self, state: StateVector) -> StateVector:
        e = self.entries
        x, y = state.components
        return StateVector((e[0][0] * x + e[0][1] * y, e[1][0] * x + e[1][1] * y))


def _mat_mul(a: Matrix, b: Matrix) -> Matrix:
    return tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(2)) for j in range(2))
        for i in range(2)
    )


def _mat_add(a: Matrix, b: Matrix, sb: complex = 1.0) -> Matrix:
    return tuple(
        tuple(a[i][j] + sb * b[i][j] for j in range(2)) for i in range(2)
    )


def op_add(x: HermitianOperator, y: HermitianOperator) -> HermitianOperator:
    return HermitianOperator(_mat_add(x.entries, y.entries))


def op_scale(s: float, x: HermitianOperator) -> HermitianOperator:
    return HermitianOperator(
        tuple(tuple(s * z for z in row) for row in x.entries)
    )


def b_operator(b_var: DichotomousVariable) -> HermitianOperator:
    """Multiplication operator diag(b1, b2): each canonical basis vector is an
    eigenvector for its own value."""
    b1, b2 = (float(v) for v in b_var.values)
    return HermitianOperator(((b1 + 0j, 0j), (0j, b2 + 0j)))


def function_of_b(
    b_var: DichotomousVariable, g: Mapping[Fraction, Fraction]
) -> HermitianOperator:
    g1, g2 = (float(g[v]) for v in b_var.values)
    return HermitianOperator(((g1 + 0j, 0j), (0j, g2 + 0j)))


def _rotated_diagonal(
    values: tuple[float, float], transition: TransitionMatrix
) -> HermitianOperator:
    # Conjugation of diag(values) by the real orthogonal matrix with columns
    # (q1, q2) and (-q2, q1).
    q1sq = float(transition.entries[0][0])
    q2sq = float(transition.entries[0][1])
    q1q2 = math.sqrt(q1sq * q2sq)
    v1, v2 = values
    d11 = v1 * q1sq + v2 * q2sq
    d22 = v1 * q2sq + v2 * q1sq
    d12 = (v1 - v2) * q1q2
    return HermitianOperator(((d11 + 0j, d12 + 0j), (d12 + 0j, d22 + 0j)))


def a_operator(
    a_var: DichotomousVariable, transition: TransitionMatrix
) -> HermitianOperator:
    """Real symmetric representation of a in the b-basis; requires an exactly
    doubly stochastic transition matrix."""
    if not is_double_stochastic(transition):
        raise NotDoubleStochasticError(
            "representing a in the b-basis needs a doubly stochastic matrix"
        )
    return _rotated_diagonal(tuple(float(v) for v in a_var.values), transition)


def function_of_a(
    a_var: DichotomousVariable,
    transition: TransitionMatrix,
    f: Mapping[Fraction, Fraction],
) -> HermitianOperator:
    """f applied on the spectrum of the a-operator (same eigenvectors)."""
    if not is_double_stochastic(transition):
        raise NotDoubleStochasticError(
            "representing a in the b-basis needs a doubly stochastic matrix"
        )
    return _rotated_diagonal(
        tuple(float(f[v]) for v in a_var.values), transition
    )


def commutator(x: HermitianOperator, y: HermitianOperator) -> Matrix:
    """x y - y x; anti-Hermitian, so returned as a plain matrix."""
    return _mat_add(
        _mat_mul(x.entries, y.entries), _mat_mul(y.entries, x.entries), sb=-1.0
    )


def symmetrized_product(
    x: HermitianOperator, y: HermitianOperator
) -> HermitianOperator:
    half = _mat_add(
        _mat_mul(x.entries, y.entries), _mat_mul(y.entries, x.entries)
    )
    return HermitianOperator(
        tuple(tuple(0.5 * z for z in row) for row in half)
    )


def quantum_mean(op: HermitianOperator, state: StateVector) -> float:
    value = op.apply(state).inner(state)
    if abs(value.imag) > 1e-12 * max(1.0, abs(value.real)):
        raise ValueError("mean of a Hermitian operator must be real")
    return value.real


@dataclass(frozen=True)
class SpectralDecomposition:
    """Closed-form eigensystem of a 2x2 Hermitian matrix.

    Eigenvalues ascend; each eigenvector is normalised with its first
    non-negligible component made real positive.  ``degenerate`` flags a
    collapsed spectrum, in which case distribution weights are merged.
    """

    eigenvalues: tuple[float, float]
    eigenvectors: tuple[StateVector, StateVector]
    degenerate: bool


def spectral_decomposition(op: HermitianOperator) -> SpectralDecomposition:
    e = op.entries
    alpha = e[0][0].real
    dlt = e[1][1].real
    beta = e[0][1]
    mid = 0.5 * (alpha + dlt)
    radius = math.hypot(0.5 * (alpha - dlt), abs(beta))
    lo, hi = mid - radius, mid + radius
    scale = max(1.0, abs(lo), abs(hi))
    degenerate = (hi - lo) <= 1e-12 * scale

    if abs(beta) <= 1e-14 * scale:
        canonical = (
            StateVector((1.0 + 0j, 0j)),
            StateVector((0j, 1.0 + 0j)),
        )
        if degenerate or alpha <= dlt:
            vectors = canonical
        else:
            vectors = (canonical[1], canonical[0])
    else:

        def eigenvector(k: float) -> StateVector:
            raw = (beta, complex(k - alpha))
            norm = math.sqrt(sum(abs(z) ** 2 for z in raw))
            return phase_normalized(StateVector(tuple(z / norm for z in raw)))

        vectors = (eigenvector(lo), eigenvector(hi))

    return SpectralDecomposition(
        eigenvalues=(lo, hi), eigenvectors=vectors, degenerate=degenerate
    )


def observable_distribution(
    op: HermitianOperator, state: StateVector
) -> dict[float, float]:
    """Spectral probabilities |<state, eigenvector>|^2, merged per eigenvalue
    when the spectrum is degenerate; they sum to one."""
    spec = spectral_decomposition(op)
    dist: dict[float, float] = {}
    for k, vec in zip(spec.eigenvalues, spec.eigenvectors):
        weight = abs(state.inner(vec)) ** 2
        if spec.degenerate:
            k = spec.eigenvalues[0]
        dist[k] = dist.get(k, 0.0) + weight
    return dict(sorted(dist.items()))


class ObservableKind(Enum):
    F_OF_A = "f_of_a"
    G_OF_B = "g_of_b"
    SUM = "sum"
    PRODUCT = "product"


@dataclass(frozen=True)
class CompositeObservable:
    """A random variable built from the fundamental pair.

    Supported shapes: f(a), g(b), f(a) + g(b) and the product a*b.  The first
    three admit operator counterparts with matched means on every represented
    context; the product maps to the symmetrised operator product, whose mean
    is generally different.
    """

    kind: ObservableKind
    a: DichotomousVariable | None
    b: DichotomousVariable | None
    f: Mapping[Fraction, Fraction] | None = None
    g: Mapping[Fraction, Fraction] | None = None

    @staticmethod
    def of_a(
        a: DichotomousVariable,
        b: DichotomousVariable,
        f: Mapping[Fraction, Fraction],
    ) -> "CompositeObservable":
        """f(a); the partner b fixes the basis of the operator counterpart."""
        return CompositeObservable(ObservableKind.F_OF_A, a, b, f=dict(f))

    @staticmethod
    def of_b(
        b: DichotomousVariable, g: Mapping[Fraction, Fraction]
    ) -> "CompositeObservable":
        return CompositeObservable(ObservableKind.G_OF_B, None, b, g=dict(g))

    @staticmethod
    def sum_of(
        a: DichotomousVariable,
        b: DichotomousVariable,
        f: Mapping[Fraction, Fraction] | None = None,
        g: Mapping[Fraction, Fraction] | None = None,
    ) -> "CompositeObservable":
        f = dict(f) if f is not None else {v: v for v in a.values}
        g = dict(g) if g is not None else {v: v for v in b.values}
        return CompositeObservable(ObservableKind.SUM, a, b, f=f, g=g)

    @staticmethod
    def product_of(
        a: DichotomousVariable, b: DichotomousVariable
    ) -> "CompositeObservable":
        return CompositeObservable(ObservableKind.PRODUCT, a, b)

    def value_at(self, point: str) -> Fraction:
        if self.kind is ObservableKind.F_OF_A:
            return self.f[self.a.value_at(point)]
        if self.kind is ObservableKind.G_OF_B:
            return self.g[self.b.value_at(point)]
        if self.kind is ObservableKind.SUM:
            return self.f[self.a.value_at(point)] + self.g[self.b.value_at(point)]
        return self.a.value_at(point) * self.b.value_at(point)


def to_operator(
    space: FiniteProbabilitySpace, obs: CompositeObservable
) -> HermitianOperator:
    """Operator counterpart of a composite observable in the b-basis."""
    if obs.kind is ObservableKind.G_OF_B:
        return function_of_b(obs.b, obs.g)
    trans = transition_matrix(space, obs.a, obs.b)
    if obs.kind is ObservableKind.F_OF_A:
        return function_of_a(obs.a, trans, obs.f)
    if obs.kind is ObservableKind.SUM:
        return op_add(
            function_of_a(obs.a, trans, obs.f), function_of_b(obs.b, obs.g)
        )
    return symmetrized_product(a_operator(obs.a, trans), b_operator(obs.b))


def classical_mean(
    space: FiniteProbabilitySpace, obs: CompositeObservable, c: Event
) -> Fraction:
    """Exact conditional expectation of the observable: sum of values weighted
    by the conditional point masses."""
    pc = probability(space, c)
    if pc == 0:
        raise ZeroConditionError(f"{c.label()} has measure zero")
    return (
        sum(
            (obs.value_at(p) * space.weights[p] for p in c.members),
            start=Fraction(0),
        )
        / pc
    )


def classical_distribution(
    space: FiniteProbabilitySpace, obs: CompositeObservable, c: Event
) -> dict[Fraction, Fraction]:
    """Exact pushforward of the conditional measure under the observable."""
    pc = probability(space, c)
    if pc == 0:
        raise ZeroConditionError(f"{c.label()} has measure zero")
    dist: dict[Fraction, Fraction] = {
        obs.value_at(p): Fraction(0) for p in space.points
    }
    for p in c.members:
        dist[obs.value_at(p)] += space.weights[p] / pc
    return dict(sorted(dist.items()))


def represented_states(
    space: FiniteProbabilitySpace,
    a_var: DichotomousVariable,
    b_var: DichotomousVariable,
    signs: SignConvention = SignConvention(),
) -> tuple[tuple[Event, StateVector], ...]:
    """(event, state) pairs for every mappable context plus the two a-cells."""
    trans = transition_matrix(space, a_var, b_var)
    if is_double_stochastic(trans):
        basis = a_basis(space, a_var, b_var, signs=signs)
    else:
        basis = context_basis(space, a_var, b_var, signs=signs)
    pairs = [
        (c, amplitude(space, a_var, b_var, c, signs))
        for c in mappable_contexts(space, a_var, b_var)
    ]
    pairs.extend(extend_to_cells(space, a_var, basis).items())
    pairs.sort(key=lambda item: (len(item[0].members), item[0].members))
    return tuple(pairs)


def mean_preservation_gap(
    space: FiniteProbabilitySpace,
    a_var: DichotomousVariable,
    b_var: DichotomousVariable,
    f: Mapping[Fraction, Fraction],
    g: Mapping[Fraction, Fraction],
    signs: SignConvention = SignConvention(),
) -> float:
    """Largest |quantum mean - exact conditional mean| of f(a) + g(b) over
    every represented context, including the two a-cells."""
    obs = CompositeObservable.sum_of(a_var, b_var, f, g)
    op = to_operator(space, obs)
    worst = 0.0
    for c, state in represented_states(space, a_var, b_var, signs):
        gap = abs(quantum_mean(op, state) - float(classical_mean(space, obs, c)))
        worst = max(worst, gap)
    return worst


@dataclass(frozen=True)
class MismatchReport:
    """Classical versus spectral distribution of one observable in one
    context, with the total-variation gap computed after an optional affine
    re-scaling value -> scale * value + offset of the classical support."""

    classical: dict[Fraction, Fraction]
    quantum: dict[float, float]
    alignment: tuple[float, float] | None
    total_variation: float


def _total_variation(
    p: Mapping[float, float], q: Mapping[float, float], grid: float = 1e-9
) -> float:
    keys: dict[float, tuple[float, float]] = {}
    for value, mass in p.items():
        k = round(value / grid) * grid
        acc = keys.get(k, (0.0, 0.0))
        keys[k] = (acc[0] + mass, acc[1])
    for value, mass in q.items():
        k = round(value / grid) * grid
        acc = keys.get(k, (0.0, 0.0))
        keys[k] = (acc[0], acc[1] + mass)
    return 0.5 * sum(abs(a - b) for a, b in keys.values())


def distribution_mismatch(
    space: FiniteProbabilitySpace,
    a_var: DichotomousVariable,
    b_var: DichotomousVariable,
    obs: CompositeObservable,
    c: Event,
    signs: SignConvention = SignConvention(),
    alignment: tuple[float, float] | None = None,
) -> MismatchReport:
    if obs.kind not in (ObservableKind.SUM, ObservableKind.PRODUCT):
        raise ValueError("mismatch reports cover sum and product observables")
    classical = classical_distribution(space, obs, c)
    state = amplitude(space, a_var, b_var, c, signs)
    quantum = observable_distribution(to_operator(space, obs), state)
    if alignment is None:
        mapped = {float(v): float(m) for v, m in classical.items()}
    else:
        scale, offset = alignment
        mapped = {
            scale * float(v) + offset: float(m) for v, m in classical.items()
        }
    return MismatchReport(
        classical=classical,
        quantum=quantum,
        alignment=alignment,
        total_variation=_total_variation(mapped, quantum),
    )


def hamiltonian(
    space: FiniteProbabilitySpace,
    a_var: DichotomousVariable,
    b_var: DichotomousVariable,
    h: Fraction | int | str | float,
    potential: Mapping[Fraction, Fraction],
) -> HermitianOperator:
    """Energy-style operator (h/2) (a-op squared + potential(b-op))."""
    h = as_fraction(h)
    if h <= 0:
        raise ValueError("the scale constant must be positive")
    trans = transition_matrix(space, a_var, b_var)
    squared = {v: v * v for v in a_var.values}
    return op_scale(
        float(h) / 2.0,
        op_add(
            function_of_a(a_var, trans, squared),
            function_of_b(b_var, potential),
        ),
    )


def hamiltonian_observable(
    a_var: DichotomousVariable,
    b_var: DichotomousVariable,
    h: Fraction | int | str | float,
    potential: Mapping[Fraction, Fraction],
) -> CompositeObservable:
    """The random variable (h/2) (a^2 + potential(b)) matching
    :func:`hamiltonian` by construction."""
    h = as_fraction(h)
    f = {v: h / 2 * v * v for v in a_var.values}
    g = {v: h / 2 * potential[v] for v in b_var.values}
    return CompositeObservable.sum_of(a_var, b_var, f, g)


def conditional_variance(
    space: FiniteProbabilitySpace, values: Mapping[str, Fraction], c: Event
) -> Fraction:
    """Exact conditional variance of an arbitrary point-valued map."""
    pc = probability(space, c)
    if pc == 0:
        raise ZeroConditionError(f"{c.label()} has measure zero")
    mean = (
        sum((values[p] * space.weights[p] for p in c.members), start=Fraction(0))
        / pc
    )
    return (
        sum(
            ((values[p] - mean) ** 2 * space.weights[p] for p in c.members),
            start=Fraction(0),
        )
        / pc
    )


def dispersion(
    space: FiniteProbabilitySpace, obs: CompositeObservable, c: Event
) -> Fraction:
    """Exact conditional variance of the observable."""
    values = {p: obs.value_at(p) for p in space.points}
    return conditional_variance(space, values, c)


@dataclass(frozen=True)
class DispersionFreeReport:
    """Events of zero conditional variance for *every* random variable.

    Point indicators separate any two points, so exactly the atoms qualify.
    ``representable`` lists the events of the represented family (mappable
    contexts plus the two a-cells); for an incompatible pair the intersection
    is empty because each cell of a dichotomous pair needs two points and an
    atom meets only one cell.
    """

    dispersion_free: tuple[Event, ...]
    representable: tuple[Event, ...]
    intersection: tuple[Event, ...]


def dispersion_free_search(
    space: FiniteProbabilitySpace,
    a_var: DichotomousVariable,
    b_var: DichotomousVariable,
) -> DispersionFreeReport:
    indicators = [
        {p: Fraction(1 if p == q else 0) for p in space.points}
        for q in space.points
    ]
    free = [
        evt
        for evt in all_events(space)
        if all(conditional_variance(space, ind, evt) == 0 for ind in indicators)
    ]
    free.sort(key=lambda e: (len(e.members), e.members))
    represented = [evt for evt, _ in represented_states(space, a_var, b_var)]
    membership = set(represented)
    inter = [evt for evt in free if evt in membership]
    return DispersionFreeReport(
        dispersion_free=tuple(free),
        representable=tuple(represented),
        intersection=tuple(inter),
    )
