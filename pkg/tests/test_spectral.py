import math

import numpy as np
import pytest
from scipy.stats import ortho_group

from config import get_settings
from corpus import DEFECTIVE_TOLERANCES, jordan_matrix, make_rng, matrix_corpus, unimodular
from errors import ConjugatePairingError, InputError
from oracles import drazin_axiom_check
from spectral import (
    EigenCluster,
    Matrix,
    SubsetKind,
    _symmetrize,
    analyze,
    build_companion,
    classify_spectrum,
    drazin_inverse,
    eig_decompose,
    eigen_index,
    norm,
    signed_power,
    spectral_projector,
    spectral_radius,
)


def _analysis(rows, **overrides):
    return analyze(Matrix.from_real(rows), get_settings().tolerances(**overrides))


def _values(analysis, kind):
    c = analysis.classification
    return sorted(c.cluster(i).value.real for i in c.ids_for(kind))


def test_matrix_rejects_non_square():
    with pytest.raises(InputError):
        Matrix.from_real([[1.0, 2.0]])


def test_matrix_entries_are_read_only():
    m = Matrix.from_real([[1.0]])
    with pytest.raises(ValueError):
        m.entries[0, 0] = 2.0


def test_classify_diagonal_forward_and_backward():
    analysis = _analysis([[0.5, 0.0], [0.0, 2.0]])
    assert _values(analysis, SubsetKind.forward) == [pytest.approx(0.5)]
    assert _values(analysis, SubsetKind.backward) == [pytest.approx(2.0)]
    assert analysis.frequencies == ()
    report = analysis.report()
    assert report.spectral_radius == pytest.approx(2.0)
    assert report.unit_margin == pytest.approx(0.5)
    assert {e.group for e in report.eigenvalues} == {"forward", "backward"}


def test_classify_rotation_has_conjugate_frequencies():
    analysis = _analysis([[0.0, -1.0], [1.0, 0.0]])
    assert analysis.frequencies == (pytest.approx(-math.pi / 2), pytest.approx(math.pi / 2))
    assert analysis.frequencies[0] == -analysis.frequencies[1]
    assert analysis.index_at(math.pi / 2) == 1


def test_unit_root_minus_one_is_frequency_pi():
    analysis = _analysis([[-1.0]])
    assert analysis.frequencies == (math.pi,)


def test_jordan_block_at_one_has_index_two():
    analysis = _analysis([[1.0, 1.0], [0.0, 1.0]])
    (cluster,) = analysis.classification.clusters
    assert cluster.algebraic_multiplicity == 2
    assert cluster.index == 2
    assert analysis.frequencies == (0.0,)


def test_eig_decompose_reports_multiplicity_index_and_basis():
    m = Matrix.from_real([[0.5, 1.0, 0.0], [0.0, 0.5, 0.0], [0.0, 0.0, 2.0]])
    decomposition = eig_decompose(m, 1e-4)
    summary = sorted(
        (round(c.value.real, 8), c.algebraic_multiplicity, c.index) for c in decomposition.clusters
    )
    assert summary == [(0.5, 2, 2), (2.0, 1, 1)]
    for c in decomposition.clusters:
        basis = decomposition.basis(c.id)
        assert basis.shape == (3, c.algebraic_multiplicity)
        image = m.entries @ basis
        np.testing.assert_allclose(basis @ (basis.conj().T @ image), image, atol=1e-12)


def test_classify_spectrum_groups_and_pairs():
    values = [0.0, 0.9, 1.0, -1.5, 1j, -1j]
    clusters = [EigenCluster(i, complex(v), 1, 1, (i,)) for i, v in enumerate(values)]
    c = classify_spectrum(clusters, 1e-9, tol_cluster=1e-7)
    assert c.zero_set == (0,)
    assert c.forward_set == (1,)
    assert c.backward_set == (3,)
    assert c.unit_set == (2, 4, 5)
    assert c.frequencies == pytest.approx((-math.pi / 2, 0.0, math.pi / 2))
    assert c.is_conjugation_closed((4, 5))
    assert not c.is_conjugation_closed((4,))
    assert c.unit_margin() == pytest.approx(0.1)


def test_projector_for_explicit_cluster_subset():
    m = Matrix.from_real(np.diag([0.5, 2.0, -1.0]))
    c = analyze(m).classification
    p = spectral_projector(m, c, frozenset(c.forward_set + c.backward_set))
    assert p.rank == 2
    assert p.matrix.is_real_input
    np.testing.assert_allclose(p.entries.real, np.diag([1.0, 1.0, 0.0]), atol=1e-12)
    at_pi = c.cluster(c.frequency_cluster(math.pi))
    assert eigen_index(m, at_pi, spectral_projector(m, c, math.pi)) == 1


def test_split_defective_pair_names_tol_cluster():
    values = [complex(0.999997, 6.2e-6), complex(0.999997, -6.2e-6)]
    with pytest.raises(ConjugatePairingError, match="tol_cluster") as info:
        _symmetrize(values, [2, 1], 1e-7)
    assert info.value.details["tol_cluster"] == 1e-7


def test_frequency_matching_follows_tol_cluster():
    rotation = [[0.0, -1.0], [1.0, 0.0]]
    near = math.pi / 2 + 1e-5
    with pytest.raises(InputError):
        _analysis(rotation).index_at(near)
    loose = _analysis(rotation, tol_cluster=1e-4)
    assert loose.index_at(near) == 1
    assert loose.frequency_projector(near).rank == 1


def test_projector_splits_upper_triangular_example():
    analysis = _analysis([[1.0, 1.0], [0.0, 0.5]])
    p_forward = analysis.projector(SubsetKind.forward).entries
    p_unit = analysis.projector(SubsetKind.unit).entries
    np.testing.assert_allclose(p_forward.real, [[0.0, -2.0], [0.0, 1.0]], atol=1e-12)
    np.testing.assert_allclose(p_unit.real, [[1.0, 2.0], [0.0, 0.0]], atol=1e-12)
    np.testing.assert_allclose(p_forward @ np.array([0.0, 1.0]), [-2.0, 1.0], atol=1e-12)


def test_empty_and_full_subsets():
    analysis = _analysis([[0.5, 0.0], [0.0, 2.0]])
    assert analysis.projector(SubsetKind.empty).rank == 0
    np.testing.assert_array_equal(analysis.projector(SubsetKind.empty).entries, np.zeros((2, 2)))
    np.testing.assert_allclose(analysis.projector(SubsetKind.everything).entries, np.eye(2))


def test_unknown_frequency_is_input_error():
    analysis = _analysis([[0.0, -1.0], [1.0, 0.0]])
    with pytest.raises(InputError):
        analysis.projector(0.3)


def test_drazin_nonsingular_is_inverse():
    phi = Matrix.from_real([[2.0, 1.0], [0.5, 3.0]])
    d = drazin_inverse(phi)
    np.testing.assert_allclose(d.entries, np.linalg.inv(phi.entries), atol=1e-12)
    assert d.is_real_input


def test_drazin_nilpotent_is_zero():
    d = drazin_inverse(Matrix.from_real([[0.0, 1.0], [0.0, 0.0]]))
    np.testing.assert_array_equal(d.entries, np.zeros((2, 2)))


def test_drazin_of_idempotent_is_itself():
    phi = Matrix.from_real([[1.0, 1.0], [0.0, 0.0]])
    d = drazin_inverse(phi)
    np.testing.assert_allclose(d.entries.real, phi.entries.real, atol=1e-12)
    assert drazin_axiom_check(phi, d).passed


def test_signed_power_uses_drazin_for_negative_exponents():
    phi = Matrix.from_real([[2.0, 0.0], [0.0, 0.0]])
    np.testing.assert_allclose(signed_power(phi, -2).entries.real, [[0.25, 0.0], [0.0, 0.0]])
    np.testing.assert_allclose(signed_power(phi, 0).entries.real, np.eye(2))


def test_spectral_radius_and_companion():
    companion = build_companion([[[0.5]], [[0.2]]])
    np.testing.assert_allclose(companion.entries.real, [[0.5, 0.2], [1.0, 0.0]])
    roots = np.roots([1.0, -0.5, -0.2])
    assert spectral_radius(companion) == pytest.approx(max(abs(roots)))


def test_companion_rejects_mismatched_blocks():
    with pytest.raises(InputError):
        build_companion([np.eye(2), np.eye(3)])


CORPUS = matrix_corpus(200)


def _block_index(instance, value):
    sizes = [
        k
        for v, k in instance.blocks
        if abs(v - value) < 1e-6 or abs(v.conjugate() - value) < 1e-6
    ]
    return max(sizes)


@pytest.mark.parametrize("instance", CORPUS, ids=[c.name for c in CORPUS])
def test_projection_identities_over_corpus(instance):
    analysis = instance.analyze()
    phi = analysis.phi.entries
    n = analysis.dim
    d = max(c.index for c in analysis.classification.clusters)
    bound = 1e-8 * max(1.0, norm(phi)) ** d

    groups = [SubsetKind.zero, SubsetKind.forward, SubsetKind.backward, SubsetKind.unit]
    projectors = [analysis.projector(kind).entries for kind in groups]
    for p in projectors:
        assert norm(p @ p - p) <= bound
        assert norm(p @ phi - phi @ p) <= bound
    assert norm(sum(projectors) - np.eye(n)) <= bound
    for i, p in enumerate(projectors):
        for j, q in enumerate(projectors):
            if i != j:
                assert norm(p @ q) <= bound

    for cluster in analysis.classification.clusters:
        assert cluster.index == _block_index(instance, cluster.value)

    for theta in analysis.frequencies:
        p = analysis.frequency_projector(theta).entries
        q = analysis.frequency_projector(-theta if theta != math.pi else theta).entries
        assert norm(np.conj(p) - q) <= bound


@pytest.mark.parametrize("instance", CORPUS, ids=[c.name for c in CORPUS])
def test_drazin_axioms_over_corpus(instance):
    tolerances = instance.tolerances()
    d = drazin_inverse(instance.phi, tolerances=tolerances)
    loose = tolerances.model_copy(update={"tol_drazin": 1e-8})
    report = drazin_axiom_check(instance.phi, d, tolerances=loose)
    assert report.passed
    if all(abs(v) > 0 for v, _ in instance.blocks):
        inverse = np.linalg.inv(instance.phi.entries)
        assert norm(d.entries - inverse) <= 1e-8 * max(1.0, norm(inverse))


@pytest.mark.parametrize("instance", CORPUS, ids=[c.name for c in CORPUS])
def test_stable_parts_and_cluster_drazin_over_corpus(instance):
    analysis = instance.analyze()
    tol = analysis.tolerances
    phi = analysis.phi.entries
    d = max(c.index for c in analysis.classification.clusters)
    bound = 1e-8 * max(1.0, norm(phi)) ** d

    p_stable = analysis.projector(SubsetKind.stable).entries
    p_zero = analysis.projector(SubsetKind.zero).entries
    p_forward = analysis.projector(SubsetKind.forward).entries
    p_backward = analysis.projector(SubsetKind.backward).entries
    assert norm(p_stable - p_zero - p_forward) <= bound

    drazin = analysis.drazin.entries
    assert spectral_radius(phi @ p_stable) < 1.0 - tol.tol_unit
    assert spectral_radius(drazin @ p_backward) < 1.0 - tol.tol_unit

    for cluster in analysis.classification.clusters:
        if cluster.index != 1 or abs(cluster.value) <= tol.tol_unit:
            continue
        p = analysis.projector(frozenset({cluster.id})).entries
        gap = norm(drazin @ p - p / cluster.value)
        assert gap <= 1e-8 * max(1.0, norm(drazin)) * max(1.0, norm(p))


def _group(value):
    modulus = abs(value)
    if modulus == 0:
        return SubsetKind.zero
    if modulus == 1:
        return SubsetKind.unit
    return SubsetKind.forward if modulus < 1 else SubsetKind.backward


def _selector(blocks, kind):
    diagonal = []
    for value, size in blocks:
        width = size * (2 if complex(value).imag else 1)
        diagonal += [1.0 if _group(value) == kind else 0.0] * width
    return np.diag(diagonal)


def _similarity(kind, dim, rng):
    if kind == "orthogonal":
        q = ortho_group.rvs(dim, random_state=rng)
        return q, q.T
    return unimodular(dim, rng)


JORDAN_STRUCTURES = [
    [(0.5, 2), (1.0, 1), (2.0, 1)],
    [(0.0, 2), (1.0, 2)],
    [(1j, 1), (-1.0, 1), (0.0, 1)],
    [(complex(0.3, 0.4), 2)],
]


# size-3 blocks split by about eps**(1/3) times the conditioning of the similarity
@pytest.mark.parametrize(
    "blocks, kind",
    [(b, k) for b in JORDAN_STRUCTURES for k in ("orthogonal", "unimodular")]
    + [([(-1.0, 3), (3.0, 1)], "orthogonal")],
)
def test_projectors_match_jordan_basis_selectors(blocks, kind):
    rng = make_rng(77)
    jordan = jordan_matrix(blocks)
    q, q_inv = _similarity(kind, jordan.shape[0], rng)
    analysis = _analysis(q @ jordan @ q_inv, **DEFECTIVE_TOLERANCES)
    for subset in (SubsetKind.zero, SubsetKind.forward, SubsetKind.backward, SubsetKind.unit):
        expected = q @ _selector(blocks, subset) @ q_inv
        computed = analysis.projector(subset).entries
        assert norm(computed - expected) <= 1e-8 * max(1.0, norm(expected))
