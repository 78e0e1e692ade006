import math

import numpy as np
import pytest

from oracles import (
    benchmark_partition_sums,
    fd_swapped_gradient,
    psd_safe_direction,
)
from rstn.families import appendix_c, random_scenario, tiny_generic, two_sector
from rstn.graph import BoundaryLink, ColoredGraph, Link
from rstn.ising import (
    IsingEngine,
    SizeCapError,
    down_set,
    hamiltonian_bulk_boundary,
    purity_gradient,
)
from rstn.state import Scenario, Sector

BLOCK_PARAMS = dict(
    a=0.3, d=0.25, w=0.45, b=0.1 + 0.05j, u=0.12 - 0.03j, v=0.07 + 0.02j
)


def test_down_set():
    assert down_set(0b101, 3) == {0, 2}
    assert down_set(0, 4) == frozenset()


@pytest.mark.parametrize("twice_s", [2, 20])
def test_partition_sums_match_frozen_forms(twice_s):
    sc = appendix_c(twice_s, **BLOCK_PARAMS)
    engine = IsingEngine(sc)
    forms = benchmark_partition_sums(twice_s, **BLOCK_PARAMS)
    for (m, n, variant), expect in forms.items():
        r = engine.partition_pair(m, n)
        got = (r.z1 if variant else r.z0).to_linear()
        assert got == pytest.approx(expect, rel=1e-12)


def test_pair_symmetry():
    sc = appendix_c(4, **BLOCK_PARAMS)
    engine = IsingEngine(sc)
    a, b = engine.partition_pair(0, 1), engine.partition_pair(1, 0)
    assert a.z0.log == pytest.approx(b.z0.log, rel=1e-12)
    assert a.z1.log == pytest.approx(b.z1.log, rel=1e-12)


def test_sigma_I_diagonal_is_renyi_of_reduction():
    sc = tiny_generic()
    engine = IsingEngine(sc)
    rho = sc.block(0, 0)
    dims = sc.vertex_dims(0)
    # reduce to vertex 0 by tracing the second factor
    arr = rho.reshape(dims[0], dims[1], dims[0], dims[1])
    red = np.trace(arr, axis1=1, axis2=3)
    expect = -math.log(np.trace(red @ red).real)
    assert engine.sigma_I(0, 0, frozenset({0})) == pytest.approx(expect)
    assert engine.sigma_I(0, 0, frozenset()) == 0.0
    full = -math.log(np.trace(rho @ rho).real)
    assert engine.sigma_I(0, 0, frozenset({0, 1})) == pytest.approx(full)


def test_sigma_I_benchmark_special_cases():
    sc = appendix_c(4, **BLOCK_PARAMS)
    engine = IsingEngine(sc)
    a, d, w = BLOCK_PARAMS["a"], BLOCK_PARAMS["d"], BLOCK_PARAMS["w"]
    u, v = BLOCK_PARAMS["u"], BLOCK_PARAMS["v"]
    q = (abs(u) ** 2 + abs(v) ** 2) / (w * (a + d))
    # cross pair: swapping the sector-splitting vertex (or both) hits
    # the cross block; swapping only the agreeing vertex costs nothing
    assert math.exp(
        -engine.sigma_I(0, 1, frozenset({1}))
    ) == pytest.approx(q)
    assert math.exp(
        -engine.sigma_I(0, 1, frozenset({0, 1}))
    ) == pytest.approx(q)
    assert engine.sigma_I(0, 1, frozenset({0})) == pytest.approx(0.0)


def test_delta_constraints_cross_pair():
    sc = appendix_c(4, **BLOCK_PARAMS)
    engine = IsingEngine(sc)
    # sectors differ on b5 (vertex 1, in C for variant "x")
    # variant 0: swapping vertex 1 glues b5 across sectors -> excluded
    assert not engine.delta_ok(0, 1, 0b10, 0)
    # variant 1: b5 is in C, pinning is flipped there; the swapped
    # configuration aligns with it
    assert engine.delta_ok(0, 1, 0b10, 1)
    assert engine.delta_ok(0, 1, 0b00, 0)
    # diagonal pairs never get constrained
    assert engine.delta_ok(0, 0, 0b11, 0)


def test_delta_internal_link_any_down_endpoint():
    # two sectors differing only on the internal link: any swapped
    # endpoint must exclude the pair
    g = ColoredGraph(
        n_vertices=2,
        internal=[Link(0, 1, 1)],
        boundary=[
            BoundaryLink(0, 2), BoundaryLink(0, 3), BoundaryLink(0, 4),
            BoundaryLink(1, 2), BoundaryLink(1, 3), BoundaryLink(1, 4),
        ],
    )
    base = {"b0": 2, "b1": 2, "b2": 2, "b3": 2, "b4": 2, "b5": 2}
    sec_a = Sector({**base, "i0": 2}, "a")
    sec_b = Sector({**base, "i0": 4}, "b")
    da = 3 * 3  # per-vertex dims: (2,2,2,2) -> 3 channels
    db = 2 * 2  # (4,2,2,2) -> 2 channels
    sc = Scenario(
        graph=g,
        sectors=[sec_a, sec_b],
        amplitudes={},
        blocks={
            (0, 0): 0.5 / da * np.eye(da, dtype=complex),
            (1, 1): 0.5 / db * np.eye(db, dtype=complex),
        },
        region_C=["b3"],
    )
    engine = IsingEngine(sc)
    for config in (0b01, 0b10, 0b11):
        assert not engine.delta_ok(0, 1, config, 0)
        assert not engine.delta_ok(0, 1, config, 1)
    assert engine.delta_ok(0, 1, 0b00, 0)


def test_hamiltonian_difference_supported_on_C():
    sc = tiny_generic()
    engine = IsingEngine(sc)
    for config in range(4):
        h0 = engine.hamiltonian(0, 0, config, 0)
        h1 = engine.hamiltonian(0, 0, config, 1)
        assert h1 - h0 == pytest.approx(
            engine.hamiltonian_difference_region(0, config), abs=1e-12
        )


def test_zero_weight_sector_drops_out():
    sc = tiny_generic()
    bad_spins = dict(sc.sectors[0].spins)
    bad_spins["b0"] = 8
    two = Scenario(
        graph=sc.graph,
        sectors=[sc.sectors[0], Sector(bad_spins, "dead")],
        amplitudes=sc.amplitudes,
        blocks={(0, 0): sc.block(0, 0)},
        region_C=sc.region_C,
    )
    assert IsingEngine(two).purity() == pytest.approx(
        IsingEngine(sc).purity(), rel=1e-12
    )
    p = IsingEngine(two).distribution()
    assert p[0, 0] == pytest.approx(1.0)
    assert p[0, 1] == p[1, 0] == p[1, 1] == 0.0


def test_distribution_normalized_and_symmetric():
    sc = appendix_c(4, **BLOCK_PARAMS)
    p = IsingEngine(sc).distribution()
    assert p.sum() == pytest.approx(1.0, abs=1e-12)
    assert np.allclose(p, p.T, atol=1e-12)
    assert np.all(p >= 0)


def test_high_spin_matches_exact_at_large_spin():
    exact = IsingEngine(two_sector(199, 99, 0.5, mode="exact")).purity()
    approx = IsingEngine(two_sector(199, 99, 0.5, mode="high_spin")).purity()
    assert approx == pytest.approx(exact, rel=1e-2)


def test_high_spin_error_bound_honest():
    sc_e = appendix_c(100, w=0.5, mode="exact")
    sc_h = appendix_c(100, w=0.5, mode="high_spin")
    pe = IsingEngine(sc_e).purity()
    eng_h = IsingEngine(sc_h)
    ph = eng_h.purity()
    assert abs(ph - pe) / pe <= 2 * eng_h.error_bound() + 1e-12


def test_size_cap():
    sc = tiny_generic()
    with pytest.raises(SizeCapError):
        IsingEngine(sc, max_vertices=1)


def test_gradient_matches_finite_differences():
    rng = np.random.default_rng(11)
    sc = tiny_generic()
    rho = sc.block(0, 0)
    x = psd_safe_direction(rho, rng)
    analytic = purity_gradient(sc, x)
    numeric = fd_swapped_gradient(sc, x)
    assert analytic == pytest.approx(numeric, rel=1e-7)


def test_gradient_vanishes_along_state():
    sc = tiny_generic()
    assert purity_gradient(sc, sc.block(0, 0)) == pytest.approx(0.0, abs=1e-14)


def test_gradient_requires_hermitian():
    sc = tiny_generic()
    bad = np.triu(np.ones((4, 4), dtype=complex), 1)
    with pytest.raises(ValueError, match="Hermitian"):
        purity_gradient(sc, bad)


def test_bulk_boundary_hamiltonian():
    sc = tiny_generic()
    g = sc.graph
    spins = sc.sectors[0].spins
    # all up with all-plus field: nothing pays
    assert hamiltonian_bulk_boundary(g, spins, 0, 1) == 0.0
    # vertex 0 down: its three boundary legs + the cut link pay, and
    # with bulk field +1 the vertex dimension pays too
    expect = 4 * math.log(2) + math.log(2)
    assert hamiltonian_bulk_boundary(g, spins, 0b01, 1) == pytest.approx(
        expect
    )
    # bulk field -1 at vertex 0 instead rewards the flip
    got = hamiltonian_bulk_boundary(g, spins, 0b01, {0: -1, 1: 1})
    assert got == pytest.approx(4 * math.log(2))


def test_random_scenarios_have_unit_distribution_sum():
    rng = np.random.default_rng(5)
    for _ in range(5):
        sc = random_scenario(rng, "two", n_sectors=2, max_twice=3)
        p = IsingEngine(sc).distribution()
        assert p.sum() == pytest.approx(1.0, abs=1e-10)
