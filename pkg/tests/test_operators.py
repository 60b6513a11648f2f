"""Operator matrices, commutator, means, distributions and dispersion."""

import math
import random
from fractions import Fraction

import numpy as np
import pytest

from qcontext.errors import NotDoubleStochasticError, ZeroConditionError
from qcontext.hilbert import StateVector, amplitude, transition_matrix, TransitionMatrix
from qcontext.model_io import kq_model
from qcontext.operators import (
    CompositeObservable,
    HermitianOperator,
    a_operator,
    b_operator,
    classical_distribution,
    classical_mean,
    commutator,
    conditional_variance,
    dispersion,
    dispersion_free_search,
    distribution_mismatch,
    function_of_a,
    hamiltonian,
    hamiltonian_observable,
    mean_preservation_gap,
    observable_distribution,
    quantum_mean,
    represented_states,
    spectral_decomposition,
    symmetrized_product,
    to_operator,
)
from qcontext.prob import DichotomousVariable, FiniteProbabilitySpace
from randmodels import random_double_stochastic_model

QS = [Fraction(1, 8), Fraction(1, 4), Fraction(3, 8)]


def _kq(q):
    spec = kq_model(q)
    return spec.space, spec.variables["a"], spec.variables["b"]


def _identity(var):
    return {v: v for v in var.values}


def _zero(var):
    return {v: Fraction(0) for v in var.values}


class TestFundamentalOperators:
    def test_b_is_diagonal_multiplication(self):
        _, _, b = _kq(Fraction(1, 4))
        op = b_operator(b)
        assert op.entries == ((1 + 0j, 0j), (0j, -1 + 0j))
        e1 = StateVector((1 + 0j, 0j))
        assert op.apply(e1).components == (1 + 0j, 0j)

    def test_binary_values(self):
        var = DichotomousVariable(
            "x", (Fraction(0), Fraction(1)), {"u": 1, "v": 2}
        )
        assert b_operator(var).entries == ((0j, 0j), (0j, 1 + 0j))

    @pytest.mark.parametrize("q", QS)
    def test_a_entries_closed_form(self, q):
        space, a, b = _kq(q)
        op = a_operator(a, transition_matrix(space, a, b))
        gamma = 1.0
        off = 2.0 * gamma * math.sqrt(float(2 * q * (1 - 2 * q)))
        assert abs(op.entries[0][0] - gamma * float(4 * q - 1)) < 1e-12
        assert abs(op.entries[1][1] + gamma * float(4 * q - 1)) < 1e-12
        assert abs(op.entries[0][1] - off) < 1e-12

    def test_identity_transition_gives_diagonal(self):
        var = DichotomousVariable(
            "x", (Fraction(5), Fraction(-3)), {"u": 1, "v": 2}
        )
        trans = TransitionMatrix(
            a_values=var.values,
            b_values=(Fraction(1), Fraction(-1)),
            entries=((Fraction(1), Fraction(0)), (Fraction(0), Fraction(1))),
        )
        op = a_operator(var, trans)
        assert op.entries == ((5 + 0j, 0j), (0j, -3 + 0j))

    def test_requires_double_stochastic(self, non_ds_witness):
        space = non_ds_witness.space
        a = non_ds_witness.variables["a"]
        b = non_ds_witness.variables["b"]
        with pytest.raises(NotDoubleStochasticError):
            a_operator(a, transition_matrix(space, a, b))

    def test_hermiticity_enforced(self):
        with pytest.raises(ValueError, match="Hermitian"):
            HermitianOperator(((0j, 1 + 0j), (2 + 0j, 0j)))


class TestCommutator:
    @pytest.mark.parametrize("q", QS)
    def test_off_diagonal_closed_form(self, q):
        space, a, b = _kq(q)
        com = commutator(b_operator(b), a_operator(a, transition_matrix(space, a, b)))
        q1q2 = math.sqrt(float(2 * q * (1 - 2 * q)))
        expected = float(a.values[0] - a.values[1]) * float(
            b.values[1] - b.values[0]
        ) * q1q2
        assert expected == pytest.approx(-4.0 * q1q2)
        assert abs(com[0][0]) < 1e-12 and abs(com[1][1]) < 1e-12
        assert abs(com[1][0] - expected) < 1e-12
        assert abs(com[0][1] + expected) < 1e-12
        assert any(abs(com[i][j]) > 1e-9 for i in range(2) for j in range(2))

    def test_identity_transition_commutes(self):
        var_a = DichotomousVariable(
            "x", (Fraction(2), Fraction(-1)), {"u": 1, "v": 2}
        )
        var_b = DichotomousVariable(
            "y", (Fraction(1), Fraction(-1)), {"u": 1, "v": 2}
        )
        trans = TransitionMatrix(
            a_values=var_a.values,
            b_values=var_b.values,
            entries=((Fraction(1), Fraction(0)), (Fraction(0), Fraction(1))),
        )
        com = commutator(b_operator(var_b), a_operator(var_a, trans))
        assert all(abs(com[i][j]) < 1e-12 for i in range(2) for j in range(2))

    def test_self_commutator_vanishes(self):
        _, _, b = _kq(Fraction(1, 8))
        op = b_operator(b)
        com = commutator(op, op)
        assert all(abs(com[i][j]) == 0 for i in range(2) for j in range(2))


class TestMeans:
    def test_eigenstate_mean(self):
        _, _, b = _kq(Fraction(1, 4))
        assert quantum_mean(b_operator(b), StateVector((1 + 0j, 0j))) == 1.0

    def test_mean_over_three_point_context(self):
        space, a, b = _kq(Fraction(1, 4))
        state = amplitude(space, a, b, space.event(["w1", "w2", "w3"]))
        got = quantum_mean(b_operator(b), state)
        want = 1.0 * (1.0 / 3.0) + (-1.0) * (2.0 / 3.0)
        assert abs(got - want) < 1e-12

    def test_a_mean_over_full_space(self):
        space, a, b = _kq(Fraction(3, 8))
        state = amplitude(space, a, b, space.omega())
        op = a_operator(a, transition_matrix(space, a, b))
        assert abs(quantum_mean(op, state)) < 1e-12

    def test_classical_mean_examples(self):
        space, a, b = _kq(Fraction(1, 4))
        c123 = space.event(["w1", "w2", "w3"])
        obs_b = CompositeObservable.of_b(b, _identity(b))
        assert classical_mean(space, obs_b, c123) == Fraction(1, 3) - Fraction(2, 3)
        const = CompositeObservable.of_b(b, {v: Fraction(7) for v in b.values})
        assert classical_mean(space, const, c123) == 7
        atom = space.event(["w1"])
        both = CompositeObservable.sum_of(a, b)
        assert classical_mean(space, both, atom) == 2

    def test_zero_condition(self):
        space, a, b = _kq(Fraction(1, 4))
        obs = CompositeObservable.sum_of(a, b)
        with pytest.raises(ZeroConditionError):
            classical_mean(space, obs, space.event([]))


class TestMeanPreservation:
    @pytest.mark.parametrize("q", QS)
    def test_identity_pair(self, q):
        space, a, b = _kq(q)
        assert mean_preservation_gap(space, a, b, _identity(a), _identity(b)) < 1e-10

    def test_squared_values(self):
        # Distinct squares so the a-part is not a constant operator.
        space, _, b = _kq(Fraction(1, 8))
        rich = DichotomousVariable(
            "a", (Fraction(2), Fraction(-1)), {"w1": 1, "w2": 1, "w3": 2, "w4": 2}
        )
        f = {v: v * v for v in rich.values}
        assert mean_preservation_gap(space, rich, b, f, _zero(b)) < 1e-10
        op = to_operator(
            space, CompositeObservable.sum_of(rich, b, f, _zero(b))
        )
        state = amplitude(space, rich, b, space.event(["w1", "w3", "w4"]))
        obs = CompositeObservable.of_a(rich, b, f)
        direct = classical_mean(space, obs, space.event(["w1", "w3", "w4"]))
        assert abs(quantum_mean(op, state) - float(direct)) < 1e-10

    def test_random_value_tables(self):
        rng = random.Random(61)
        space, a, b = _kq(Fraction(1, 4))
        for _ in range(40):
            f = {v: Fraction(rng.randint(-9, 9), rng.randint(1, 7)) for v in a.values}
            g = {v: Fraction(rng.randint(-9, 9), rng.randint(1, 7)) for v in b.values}
            assert mean_preservation_gap(space, a, b, f, g) < 1e-10

    def test_random_double_stochastic_models(self):
        rng = random.Random(67)
        for _ in range(10):
            space, a, b = random_double_stochastic_model(rng)
            f = {v: Fraction(rng.randint(-9, 9)) for v in a.values}
            g = {v: Fraction(rng.randint(-9, 9)) for v in b.values}
            assert mean_preservation_gap(space, a, b, f, g) < 1e-10

    def test_symmetrized_product_breaks_preservation(self):
        # The product observable maps to the symmetrised operator product;
        # its mean is constant across states while the exact conditional mean
        # moves with the context.
        space, a, b = _kq(Fraction(1, 8))
        obs = CompositeObservable.product_of(a, b)
        op = to_operator(space, obs)
        assert abs(op.entries[0][1]) < 1e-12
        assert abs(op.entries[0][0] - op.entries[1][1]) < 1e-12
        c234 = space.event(["w2", "w3", "w4"])
        state = amplitude(space, a, b, c234)
        quantum = quantum_mean(op, state)
        classical = classical_mean(space, obs, c234)
        assert classical == Fraction(-5, 7)
        assert abs(quantum - (-0.5)) < 1e-12
        assert abs(quantum - float(classical)) > 0.2


class TestSpectral:
    def test_against_numpy_oracle(self):
        rng = random.Random(71)
        for _ in range(200):
            alpha = rng.uniform(-5, 5)
            dlt = rng.uniform(-5, 5)
            beta = complex(rng.uniform(-5, 5), rng.uniform(-5, 5))
            if rng.random() < 0.15:
                beta = 0j
            if rng.random() < 0.1:
                dlt = alpha
            op = HermitianOperator(
                ((alpha + 0j, beta), (beta.conjugate(), dlt + 0j))
            )
            spec = spectral_decomposition(op)
            m = np.array(op.entries)
            want = np.linalg.eigvalsh(m)
            assert np.allclose(spec.eigenvalues, want, atol=1e-10)
            # Orthonormality and reconstruction.
            vecs = np.array(
                [list(v.components) for v in spec.eigenvectors]
            ).T
            assert np.allclose(vecs.conj().T @ vecs, np.eye(2), atol=1e-10)
            rebuilt = vecs @ np.diag(spec.eigenvalues) @ vecs.conj().T
            assert np.allclose(rebuilt, m, atol=1e-9)

    def test_sum_operator_eigenvalues(self):
        for q in QS:
            space, a, b = _kq(q)
            op = to_operator(space, CompositeObservable.sum_of(a, b))
            spec = spectral_decomposition(op)
            k = 2.0 * math.sqrt(float(2 * q))
            assert spec.eigenvalues == pytest.approx((-k, k), abs=1e-12)

    def test_degenerate_spectrum_merges(self):
        space, a, b = _kq(Fraction(1, 8))
        op = symmetrized_product(
            a_operator(a, transition_matrix(space, a, b)), b_operator(b)
        )
        state = amplitude(space, a, b, space.omega())
        dist = observable_distribution(op, state)
        assert len(dist) == 1
        value, mass = next(iter(dist.items()))
        assert abs(value - float(4 * Fraction(1, 8) - 1)) < 1e-12
        assert abs(mass - 1.0) < 1e-12


class TestDistributions:
    def test_quantum_weights_on_witness_context(self):
        q = Fraction(1, 8)
        space, a, b = _kq(q)
        op = to_operator(space, CompositeObservable.sum_of(a, b))
        state = amplitude(space, a, b, space.event(["w2", "w3", "w4"]))
        dist = observable_distribution(op, state)
        root = math.sqrt(float(2 * q))
        lo = (1 + root) * (2 - root) / float(4 * (1 - q))
        hi = (1 - root) * (2 + root) / float(4 * (1 - q))
        values = sorted(dist)
        assert values == pytest.approx([-1.0, 1.0], abs=1e-12)
        assert dist[values[0]] == pytest.approx(lo, abs=1e-12)
        assert dist[values[1]] == pytest.approx(hi, abs=1e-12)
        assert lo == pytest.approx(9 / 14)
        assert hi == pytest.approx(5 / 14)

    def test_eigenstate_distribution_is_point_mass(self):
        _, _, b = _kq(Fraction(1, 4))
        dist = observable_distribution(b_operator(b), StateVector((1 + 0j, 0j)))
        assert sorted(dist) == [-1.0, 1.0]
        assert dist[-1.0] == pytest.approx(0.0, abs=1e-15)
        assert dist[1.0] == pytest.approx(1.0, abs=1e-15)

    def test_distribution_sums_to_one(self):
        rng = random.Random(73)
        for _ in range(10):
            space, a, b = random_double_stochastic_model(rng)
            op = to_operator(space, CompositeObservable.sum_of(a, b))
            for _, state in represented_states(space, a, b):
                dist = observable_distribution(op, state)
                assert abs(sum(dist.values()) - 1.0) < 1e-12

    def test_classical_pushforward_on_witness_context(self):
        q = Fraction(1, 8)
        space, a, b = _kq(q)
        obs = CompositeObservable.sum_of(a, b)
        got = classical_distribution(space, obs, space.event(["w2", "w3", "w4"]))
        assert got == {
            Fraction(-2): q / (1 - q),
            Fraction(0): (1 - 2 * q) / (1 - q),
            Fraction(2): Fraction(0),
        }

    def test_constant_observable_point_mass(self):
        space, a, b = _kq(Fraction(1, 4))
        const = CompositeObservable.of_b(b, {v: Fraction(3) for v in b.values})
        got = classical_distribution(space, const, space.omega())
        assert got == {Fraction(3): Fraction(1)}

    def test_b_on_own_cell(self):
        space, a, b = _kq(Fraction(1, 4))
        obs = CompositeObservable.of_b(b, _identity(b))
        got = classical_distribution(space, obs, b.cell(space, 1))
        assert got == {Fraction(-1): Fraction(0), Fraction(1): Fraction(1)}


class TestMismatch:
    def test_witness_gap_after_alignment(self):
        q = Fraction(1, 8)
        space, a, b = _kq(q)
        report = distribution_mismatch(
            space,
            a,
            b,
            CompositeObservable.sum_of(a, b),
            space.event(["w2", "w3", "w4"]),
            alignment=(2.0 * math.sqrt(float(2 * q)), -1.0),
        )
        assert report.total_variation == pytest.approx(5 / 14, abs=1e-12)

    def test_pure_function_of_b_matches(self):
        space, a, b = _kq(Fraction(1, 8))
        obs = CompositeObservable.sum_of(
            a, b, f=_zero(a), g={v: 2 * v + 1 for v in b.values}
        )
        for c in (space.event(["w1", "w2", "w3"]), space.omega()):
            report = distribution_mismatch(space, a, b, obs, c)
            assert report.total_variation < 1e-12

    def test_pure_function_of_a_matches(self):
        space, a, b = _kq(Fraction(1, 4))
        obs = CompositeObservable.sum_of(
            a, b, f={v: 3 * v for v in a.values}, g=_zero(b)
        )
        for c in (space.event(["w1", "w2", "w4"]), space.omega()):
            report = distribution_mismatch(space, a, b, obs, c)
            assert report.total_variation < 1e-10


class TestHamiltonian:
    def test_zero_potential_scales_squared_momentum(self):
        space, _, b = _kq(Fraction(1, 8))
        rich = DichotomousVariable(
            "a", (Fraction(2), Fraction(-1)), {"w1": 1, "w2": 1, "w3": 2, "w4": 2}
        )
        h = Fraction(3)
        op = hamiltonian(space, rich, b, h, _zero(b))
        trans = transition_matrix(space, rich, b)
        expected = function_of_a(rich, trans, {v: v * v for v in rich.values})
        for i in range(2):
            for j in range(2):
                assert abs(op.entries[i][j] - 1.5 * expected.entries[i][j]) < 1e-12

    def test_unit_values_make_kinetic_part_scalar(self):
        space, a, b = _kq(Fraction(1, 4))
        pot = {v: 5 * v for v in b.values}
        op = hamiltonian(space, a, b, 2, pot)
        kinetic = (
            op.entries[0][0] - pot[b.values[0]],
            op.entries[1][1] - pot[b.values[1]],
        )
        assert abs(kinetic[0] - kinetic[1]) < 1e-12
        assert abs(op.entries[0][1]) < 1e-12

    def test_mean_matches_exact_energy(self):
        space, _, b = _kq(Fraction(3, 8))
        rich = DichotomousVariable(
            "a", (Fraction(2), Fraction(-1)), {"w1": 1, "w2": 1, "w3": 2, "w4": 2}
        )
        pot = {v: v * v + 1 for v in b.values}
        op = hamiltonian(space, rich, b, "1/2", pot)
        obs = hamiltonian_observable(rich, b, "1/2", pot)
        for c, state in represented_states(space, rich, b):
            gap = abs(
                quantum_mean(op, state) - float(classical_mean(space, obs, c))
            )
            assert gap < 1e-10

    def test_energy_distribution_differs_somewhere(self):
        space, _, b = _kq(Fraction(1, 8))
        rich = DichotomousVariable(
            "a", (Fraction(2), Fraction(-1)), {"w1": 1, "w2": 1, "w3": 2, "w4": 2}
        )
        pot = {v: v for v in b.values}
        obs = hamiltonian_observable(rich, b, 2, pot)
        report = distribution_mismatch(
            space, rich, b, obs, space.event(["w2", "w3", "w4"])
        )
        assert report.total_variation > 0.1


class TestDispersion:
    def test_atom_has_zero_dispersion(self):
        space, a, b = _kq(Fraction(1, 4))
        obs = CompositeObservable.sum_of(a, b)
        assert dispersion(space, obs, space.event(["w1"])) == 0

    def test_constant_on_cell(self):
        space, a, b = _kq(Fraction(1, 4))
        obs = CompositeObservable.of_b(b, _identity(b))
        assert dispersion(space, obs, b.cell(space, 1)) == 0

    def test_bernoulli_variance(self):
        space, a, b = _kq(Fraction(1, 4))
        obs = CompositeObservable.of_b(b, _identity(b))
        got = dispersion(space, obs, space.event(["w1", "w2", "w3"]))
        spread = (b.values[0] - b.values[1]) ** 2
        assert got == spread * Fraction(1, 3) * Fraction(2, 3)

    def test_compatible_pair_cells(self):
        space, a, _ = _kq(Fraction(1, 4))
        obs = CompositeObservable.of_a(a, a, _identity(a))
        for idx in (1, 2):
            assert dispersion(space, obs, a.cell(space, idx)) == 0

    def test_single_point_space(self):
        space = FiniteProbabilitySpace.from_pairs([("only", 1)])
        values = {"only": Fraction(9)}
        assert conditional_variance(space, values, space.omega()) == 0


class TestDispersionFreeSearch:
    @pytest.mark.parametrize("q", QS)
    def test_reference_family_atoms_only(self, q):
        space, a, b = _kq(q)
        report = dispersion_free_search(space, a, b)
        assert set(report.dispersion_free) == set(space.atoms())
        assert report.intersection == ()
        assert len(report.representable) == 11

    def test_exhaustive_atomicity(self):
        rng = random.Random(79)
        for _ in range(5):
            space, a, b = random_double_stochastic_model(rng)
            report = dispersion_free_search(space, a, b)
            assert set(report.dispersion_free) == set(space.atoms())
            assert report.intersection == ()
