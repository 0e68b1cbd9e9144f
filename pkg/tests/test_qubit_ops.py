import itertools

import numpy as np
import pytest

from conftest import ket, projector, random_density, random_hermitian
from flavent.qubit_ops import (
    Bipartition,
    check_state,
    partial_trace,
    partial_transpose,
    spin_flip,
    trace_norm,
)


def bits(i, n):
    return [(i >> (n - 1 - q)) & 1 for q in range(n)]


def index(b):
    return int("".join(map(str, b)), 2)


def partial_trace_loops(rho, traced, n=3):
    keep = [q for q in range(n) if q != traced]
    out = np.zeros((4, 4), dtype=complex)
    for r, c in itertools.product(range(2**n), repeat=2):
        br, bc = bits(r, n), bits(c, n)
        if br[traced] == bc[traced]:
            out[index([br[q] for q in keep]), index([bc[q] for q in keep])] += rho[r, c]
    return out


def partial_transpose_loops(rho, qubits, n=3):
    out = np.zeros_like(rho)
    for r, c in itertools.product(range(2**n), repeat=2):
        br, bc = bits(r, n), bits(c, n)
        for q in qubits:
            br[q], bc[q] = bc[q], br[q]
        out[index(br), index(bc)] = rho[r, c]
    return out


SINGLET = projector(ket("01") - ket("10"))
BELL = projector(ket("01") + ket("10"))


@pytest.mark.parametrize("traced", [0, 1, 2])
def test_partial_trace_matches_loops(rng, traced):
    rho = random_density(8, rng)
    np.testing.assert_allclose(partial_trace(rho, traced), partial_trace_loops(rho, traced), atol=1e-15)


def test_partial_trace_product_state():
    rho = projector(ket("100"))
    np.testing.assert_array_equal(partial_trace(rho, "tau"), projector(ket("10")))
    np.testing.assert_array_equal(partial_trace(rho, "mu"), projector(ket("10")))
    np.testing.assert_array_equal(partial_trace(rho, "e"), projector(ket("00")))


def test_partial_trace_factors(rng):
    a, b, c = (random_density(2, rng) for _ in range(3))
    rho = np.kron(np.kron(a, b), c)
    np.testing.assert_allclose(partial_trace(rho, 2), np.kron(a, b), atol=1e-15)
    np.testing.assert_allclose(partial_trace(rho, 1), np.kron(a, c), atol=1e-15)
    np.testing.assert_allclose(partial_trace(rho, [0, 1]), c, atol=1e-15)


def test_partial_trace_linear_and_trace_preserving(rng):
    r1, r2 = random_density(8, rng), random_density(8, rng)
    for q in range(3):
        np.testing.assert_allclose(
            partial_trace(0.3 * r1 + 0.7 * r2, q), 0.3 * partial_trace(r1, q) + 0.7 * partial_trace(r2, q), atol=1e-15
        )
        assert np.trace(partial_trace(r1, q)) == pytest.approx(1.0, abs=1e-14)


def test_partial_trace_batched(rng):
    stack = np.stack([random_density(8, rng) for _ in range(5)])
    out = partial_trace(stack, "mu")
    for i in range(5):
        np.testing.assert_allclose(out[i], partial_trace_loops(stack[i], 1), atol=1e-15)


def test_partial_trace_rejects_bad_label(rng):
    with pytest.raises(ValueError):
        partial_trace(random_density(8, rng), "x")
    with pytest.raises(ValueError):
        partial_trace(random_density(8, rng), 3)
    with pytest.raises(ValueError):
        partial_trace(random_density(8, rng), [0, 1, 2])


@pytest.mark.parametrize("qubits", [[0], [1], [2], [0, 2], [1, 2], [0, 1, 2]])
def test_partial_transpose_matches_loops(rng, qubits):
    rho = random_density(8, rng)
    np.testing.assert_array_equal(partial_transpose(rho, qubits), partial_transpose_loops(rho, qubits))


def test_partial_transpose_product_projector_unchanged():
    rho = projector(ket("100"))
    for side in ([0], [1], [2], [0, 1]):
        np.testing.assert_array_equal(partial_transpose(rho, side), rho)


def test_partial_transpose_composition(rng):
    rho = random_density(8, rng)
    part = Bipartition.two_one(["e", "mu"], "tau")
    both = partial_transpose(partial_transpose(rho, part), part.side_a)
    np.testing.assert_array_equal(both, rho.T)


def test_partial_transpose_properties(rng):
    rho = random_density(8, rng)
    for q in range(3):
        pt = partial_transpose(rho, q)
        np.testing.assert_array_equal(partial_transpose(pt, q), rho)
        np.testing.assert_allclose(pt, pt.conj().T, atol=1e-15)
        assert np.trace(pt) == pytest.approx(1.0, abs=1e-14)


def test_bipartition_validation():
    with pytest.raises(ValueError):
        Bipartition((0, 1), (1, 2))
    with pytest.raises(ValueError):
        Bipartition((0, 1, 2), ())
    with pytest.raises(ValueError):
        Bipartition.of([0], [1], 3)
    assert Bipartition.two_one(("tau", "e"), "mu") == Bipartition((0, 2), (1,))


def test_spin_flip_invariant_states():
    np.testing.assert_allclose(spin_flip(np.eye(4) / 4), np.eye(4) / 4, atol=1e-16)
    np.testing.assert_allclose(spin_flip(SINGLET), SINGLET, atol=1e-16)


def test_spin_flip_involution(rng):
    h = random_hermitian(4, rng)
    np.testing.assert_allclose(spin_flip(spin_flip(h)), h, atol=1e-14)


def test_spin_flip_explicit():
    sy = np.array([[0, -1j], [1j, 0]])
    rho = projector(ket("00") + 0.5j * ket("11"))
    np.testing.assert_allclose(spin_flip(rho), np.kron(sy, sy) @ rho.conj() @ np.kron(sy, sy), atol=1e-16)


def test_spin_flip_spectrum_under_local_relabelling(rng):
    # swapping the two qubits leaves the spectrum of rho rho~ unchanged
    swap = np.eye(4)[[0, 2, 1, 3]]
    for _ in range(10):
        rho = random_density(4, rng)
        ev1 = np.sort_complex(np.linalg.eigvals(rho @ spin_flip(rho)))
        r2 = swap @ rho @ swap
        ev2 = np.sort_complex(np.linalg.eigvals(r2 @ spin_flip(r2)))
        np.testing.assert_allclose(ev1, ev2, atol=1e-12)


def test_trace_norm_density_is_one(rng):
    for dim in (2, 4, 8):
        assert trace_norm(random_density(dim, rng)) == pytest.approx(1.0, abs=1e-13)


def test_trace_norm_diagonal():
    assert trace_norm(np.diag([0.5, 0.5, -0.5, 0, 0, 0, 0, 0])) == pytest.approx(1.5)


def test_trace_norm_singlet_partial_transpose():
    pt = partial_transpose(SINGLET, [1])
    assert np.linalg.eigvalsh(pt) == pytest.approx([-0.5, 0.5, 0.5, 0.5])
    assert trace_norm(pt) == pytest.approx(2.0, abs=1e-14)
    embedded = np.kron(projector(ket("0")), SINGLET)
    assert trace_norm(partial_transpose(embedded, [2])) == pytest.approx(2.0, abs=1e-14)


def test_trace_norm_bounds_trace(rng):
    for _ in range(20):
        h = random_hermitian(8, rng)
        assert trace_norm(h) >= abs(np.trace(h)) - 1e-12


def test_trace_norm_rejects_non_hermitian():
    with pytest.raises(ValueError):
        trace_norm(np.array([[0, 1], [0, 0]]))


def test_check_state(rng):
    check_state(random_density(8, rng))
    with pytest.raises(ValueError):
        check_state(np.diag([1.5, -0.5]))
    with pytest.raises(ValueError):
        check_state(np.eye(4))
    with pytest.raises(ValueError):
        check_state(np.eye(3) / 3)
