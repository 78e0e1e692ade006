"""Constrained two-level model over vertex flips.

Averaging the doubled random network over its vertex states leaves a
sum over configurations sigma in {+1,-1}^V per ordered sector pair
(m, n): copy one carries the spins of m, copy two those of n, and
sigma_x records whether the two copies are swapped at vertex x.

    Z_v^{(m,n)} = sum_sigma  Delta(m,n,sigma) * exp(-H_v(m,n,sigma))

with v = 0 (normalization) or 1 (region C swapped at the boundary).
Purity of C is then a quotient of K-weighted sums of these.

Configurations are ints; bit x set means sigma_x = -1 (swapped).
Energies are natural logs; +inf marks an excluded configuration.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from rstn.logdomain import LogWeight, log_sum_tree
from rstn.parallel import det_map
from rstn.spins import dim_rep, intertwiner_dimension
from rstn.state import Scenario
from rstn.graph import ColoredGraph

SIGMA_IMAG_TOL = 1e-9
TIE_TOL = 1e-12


class SizeCapError(RuntimeError):
    """Vertex count too large for exact enumeration."""


def down_set(config: int, n: int) -> frozenset[int]:
    return frozenset(x for x in range(n) if config >> x & 1)


@dataclass
class PairResult:
    """Partition data of one ordered sector pair."""

    m: int
    n: int
    z0: LogWeight
    z1: LogWeight
    ground_config: tuple[int, int] = (0, 0)  # argmin config per variant
    ground_energy: tuple[float, float] = (math.inf, math.inf)
    degeneracy: tuple[int, int] = (1, 1)
    gap: tuple[float, float] = (math.inf, math.inf)


class IsingEngine:
    def __init__(self, sc: Scenario, max_vertices: int = 24):
        if sc.graph.n_vertices > max_vertices:
            raise SizeCapError(
                f"{sc.graph.n_vertices} vertices exceeds the enumeration "
                f"cap of {max_vertices}; raise the cap explicitly if this "
                f"is intentional"
            )
        self.sc = sc
        self.n_vert = sc.graph.n_vertices
        self.n_sec = len(sc.sectors)
        self._sigma_cache: dict[tuple[int, int, frozenset[int]], float] = {}
        g = sc.graph
        self._boundary = [
            (k, b.vertex, f"b{k}") for k, b in enumerate(g.boundary)
        ]
        self._internal = [
            (k, ln.source, ln.target, f"i{k}")
            for k, ln in enumerate(g.internal)
        ]
        self._region_C = set(sc.region_C)
        # log(2j+1) per sector and link
        self._logd = [
            {lid: math.log(dim_rep(tj)) for lid, tj in sec.spins.items()}
            for sec in sc.sectors
        ]
        self._tuples = [
            [sc.vertex_tuple(s, x) for x in range(self.n_vert)]
            for s in range(self.n_sec)
        ]
        self._vdims = [sc.vertex_dims(s) for s in range(self.n_sec)]
        self._c = [sc.c_norm(s) for s in range(self.n_sec)]

    # -- sector weights ------------------------------------------------------

    def log_K_tilde(self, m: int) -> float:
        """log of the sector weight without the bulk-state norm c_m."""
        sc = self.sc
        total = 0.0
        for _, _, lid in self._boundary:
            total += self._logd[m][lid]
        for _, _, _, lid in self._internal:
            g = sc.amplitude(lid, sc.spin(m, lid))
            a2 = abs(g) ** 2
            if a2 == 0.0:
                return -math.inf
            total += math.log(a2)
        return total

    def log_K(self, m: int) -> float:
        c = self._c[m]
        if c <= 0.0:
            return -math.inf
        return self.log_K_tilde(m) + math.log(c)

    # -- constraint factor ---------------------------------------------------

    def delta_ok(self, m: int, n: int, config: int, variant: int) -> bool:
        """Whether the sector-matching deltas of a configuration survive.

        A link needs equal spins in both sectors whenever the two
        copies are swapped on (at least one of) its ends: boundary
        half-edges with sigma_s * h = -1, internal links with a
        swapped endpoint.  A vertex-product bulk state additionally
        forces full vertex agreement on every swapped vertex.
        """
        if m == n:
            return True
        sc = self.sc
        for _, v, lid in self._boundary:
            h = -1 if (variant == 1 and lid in self._region_C) else 1
            sigma = -1 if config >> v & 1 else 1
            if sigma * h == -1 and sc.spin(m, lid) != sc.spin(n, lid):
                return False
        for _, s, t, lid in self._internal:
            if (config >> s & 1) or (config >> t & 1):
                if sc.spin(m, lid) != sc.spin(n, lid):
                    return False
        if sc.vertex_product:
            for x in range(self.n_vert):
                if config >> x & 1 and self._tuples[m][x] != self._tuples[n][x]:
                    return False
        return True

    # -- bulk-state entropy term ---------------------------------------------

    def sigma_I(self, m: int, n: int, down: frozenset[int]) -> float:
        """Entropy-like energy of the bulk state for swapped set `down`.

        -log of a normalized trace of two partially-traced,
        sector-projected reductions of rho^I; 0 when nothing is
        swapped, the Renyi-2 entropy of the reduction to `down` when
        m = n, +inf when the trace vanishes (excluded configuration).
        """
        key = (m, n, down)
        if key in self._sigma_cache:
            return self._sigma_cache[key]
        val = self._sigma_I_compute(m, n, down)
        self._sigma_cache[key] = val
        return val

    def _agrees(self, p: int, q: int, verts) -> bool:
        return all(self._tuples[p][x] == self._tuples[q][x] for x in verts)

    def _reduced(self, row: int, col: int, down: frozenset[int]) -> np.ndarray:
        """Partial trace of block rho_{row,col} over the up vertices.

        Requires the row/col vertex tuples to agree on the up set so
        the traced factors match; returns a matrix indexed by the down
        factors of row (rows) and col (columns).
        """
        blk = self.sc.block(row, col)
        rd = self._vdims[row]
        cd = self._vdims[col]
        arr = blk.reshape(tuple(rd) + tuple(cd))
        nv = self.n_vert
        up = [x for x in range(nv) if x not in down]
        # trace row factor x against col factor nv + x for up vertices
        for x in sorted(up, reverse=True):
            arr = np.trace(arr, axis1=x, axis2=nv + x)
            nv -= 1
        down_sorted = sorted(down)
        r = int(np.prod([rd[x] for x in down_sorted])) if down_sorted else 1
        c = int(np.prod([cd[x] for x in down_sorted])) if down_sorted else 1
        return arr.reshape(r, c)

    def _sigma_I_compute(self, m: int, n: int, down: frozenset[int]) -> float:
        cm, cn = self._c[m], self._c[n]
        if cm <= 0.0 or cn <= 0.0:
            return math.inf
        up = [x for x in range(self.n_vert) if x not in down]
        da, db = None, None
        for q in range(self.n_sec):
            if self._agrees(q, m, up) and self._agrees(q, n, down):
                red = self._reduced(m, q, down)
                da = red if da is None else da + red
        for q in range(self.n_sec):
            if self._agrees(q, n, up) and self._agrees(q, m, down):
                red = self._reduced(n, q, down)
                db = red if db is None else db + red
        if da is None or db is None:
            return math.inf
        t = np.trace(da @ db)
        if abs(t.imag) > SIGMA_IMAG_TOL * max(1.0, abs(t.real)):
            raise ValueError(
                f"bulk-state trace for pair ({m},{n}) is not real: {t}"
            )
        val = t.real / (cm * cn)
        if val <= 0.0:
            return math.inf
        return -math.log(val)

    # -- energies ------------------------------------------------------------

    def hamiltonian(self, m: int, n: int, config: int, variant: int) -> float:
        """Energy of a configuration for the ordered pair (m, n).

        Boundary half-edges pay log(2j+1) when swapped relative to
        their pinning (h = -1 on C for variant 1), internal links pay
        when cut, and the bulk state contributes sigma_I of the
        swapped vertex set.  Spins are read from sector m; wherever
        the two sectors could disagree on a paying link, delta_ok has
        already forced agreement.
        """
        total = 0.0
        for _, v, lid in self._boundary:
            h = -1 if (variant == 1 and lid in self._region_C) else 1
            sigma = -1 if config >> v & 1 else 1
            if sigma * h == -1:
                total += self._logd[m][lid]
        for _, s, t, lid in self._internal:
            if (config >> s & 1) != (config >> t & 1):
                total += self._logd[m][lid]
        si = self.sigma_I(m, n, down_set(config, self.n_vert))
        return total + si

    def hamiltonian_difference_region(self, m: int, config: int) -> float:
        """H_1 - H_0 for a diagonal pair: sum of sigma_s * log d over C."""
        total = 0.0
        for _, v, lid in self._boundary:
            if lid in self._region_C:
                sigma = -1 if config >> v & 1 else 1
                total += sigma * self._logd[m][lid]
        return total

    # -- partition sums ------------------------------------------------------

    def partition_pair(self, m: int, n: int) -> PairResult:
        exact = self.sc.mode == "exact"
        logs: list[list[float]] = [[], []]
        best: list[float] = [math.inf, math.inf]
        best_cfg: list[int] = [0, 0]
        degen: list[int] = [1, 1]
        second: list[float] = [math.inf, math.inf]
        for config in range(1 << self.n_vert):
            for variant in (0, 1):
                if not self.delta_ok(m, n, config, variant):
                    continue
                energy = self.hamiltonian(m, n, config, variant)
                if energy == math.inf:
                    continue
                if exact:
                    logs[variant].append(-energy)
                if energy < best[variant] * (1 - TIE_TOL) - TIE_TOL:
                    second[variant] = best[variant]
                    best[variant] = energy
                    best_cfg[variant] = config
                    degen[variant] = 1
                elif math.isclose(energy, best[variant], rel_tol=TIE_TOL,
                                  abs_tol=TIE_TOL):
                    degen[variant] += 1
                elif energy < second[variant]:
                    second[variant] = energy
        if exact:
            z0 = LogWeight(log_sum_tree(logs[0]))
            z1 = LogWeight(log_sum_tree(logs[1]))
        else:
            # ground-state dominance: keep only the minimal energy,
            # multiplied by its multiplicity
            z = []
            for variant in (0, 1):
                if best[variant] == math.inf:
                    z.append(LogWeight.ZERO)
                else:
                    z.append(
                        LogWeight(-best[variant] + math.log(degen[variant]))
                    )
            z0, z1 = z
        gaps = tuple(
            second[v] - best[v] if best[v] != math.inf else math.inf
            for v in (0, 1)
        )
        return PairResult(
            m=m, n=n, z0=z0, z1=z1,
            ground_config=tuple(best_cfg), ground_energy=tuple(best),
            degeneracy=tuple(degen), gap=gaps,
        )

    def all_pairs(self) -> list[PairResult]:
        pairs = [
            (m, n) for m in range(self.n_sec) for n in range(self.n_sec)
        ]
        return det_map(lambda mn: self.partition_pair(*mn), pairs)

    # -- observable quotients ------------------------------------------------

    def distribution(self) -> np.ndarray:
        """P(m, n) proportional to K_m K_n Z_0^{(m,n)}, normalized."""
        results = self.all_pairs()
        logK = [self.log_K(m) for m in range(self.n_sec)]
        logs = np.full((self.n_sec, self.n_sec), -math.inf)
        for r in results:
            if not r.z0.is_zero() and logK[r.m] != -math.inf \
                    and logK[r.n] != -math.inf:
                logs[r.m, r.n] = logK[r.m] + logK[r.n] + r.z0.log
        total = log_sum_tree(list(logs.flatten()))
        if total == -math.inf:
            raise ValueError("normalization sum vanishes")
        return np.exp(logs - total)

    def log_purity(self) -> float:
        results = self.all_pairs()
        logK = [self.log_K(m) for m in range(self.n_sec)]
        num, den = [], []
        for r in results:
            base = logK[r.m] + logK[r.n]
            if base == -math.inf:
                continue
            if not r.z1.is_zero():
                num.append(base + r.z1.log)
            if not r.z0.is_zero():
                den.append(base + r.z0.log)
        log_num = log_sum_tree(num)
        log_den = log_sum_tree(den)
        if log_den == -math.inf:
            raise ValueError("normalization sum vanishes")
        return log_num - log_den

    def purity(self) -> float:
        return math.exp(self.log_purity())

    def error_bound(self) -> float:
        """Crude bound on the relative weight of excited configurations."""
        gap = math.inf
        for r in self.all_pairs():
            gap = min(gap, min(r.gap))
        if gap == math.inf:
            return 0.0
        return ((1 << self.n_vert) - 1) * math.exp(-gap)


def _reduce_square(mat: np.ndarray, dims: list[int],
                   down: frozenset[int]) -> np.ndarray:
    """Partial trace of a square matrix on the vertex-factor product."""
    nv = len(dims)
    arr = mat.reshape(tuple(dims) * 2)
    for x in sorted((x for x in range(nv) if x not in down), reverse=True):
        arr = np.trace(arr, axis1=x, axis2=nv + x)
        nv -= 1
    dim = int(np.prod([dims[x] for x in sorted(down)])) if down else 1
    return arr.reshape(dim, dim)


def purity_gradient(sc: Scenario, direction: np.ndarray) -> float:
    """Directional derivative of the swapped sum along a bulk-state move.

    For a single-sector scenario the swapped partition sum is a smooth
    functional of the bulk state,

        F(rho) = sum_S alpha_S Tr[rho_S^2] / (Tr rho)^2,

    over vertex subsets S, with alpha_S the product of 1/(2j+1) over
    the links cut by S xor marked as C (but not both).  This returns
    d/d eps F(rho + eps X) at eps = 0 for a Hermitian direction X.
    The derivative along X = rho itself vanishes: F is scale invariant.
    """
    if len(sc.sectors) != 1:
        raise ValueError("gradient is defined for single-sector scenarios")
    rho = sc.block(0, 0)
    x = np.asarray(direction, dtype=complex)
    if x.shape != rho.shape:
        raise ValueError(f"direction shape {x.shape} != state {rho.shape}")
    if not np.allclose(x, x.conj().T, atol=1e-12):
        raise ValueError("direction must be Hermitian")
    g = sc.graph
    dims = sc.vertex_dims(0)
    nv = g.n_vertices
    logd = {lid: math.log(dim_rep(sc.spin(0, lid))) for lid in g.link_ids()}
    region = set(sc.region_C)
    tr_rho = float(np.trace(rho).real)
    tr_x = float(np.trace(x).real)
    total = 0.0
    for config in range(1 << nv):
        down = down_set(config, nv)
        paying = set(g.cut(down)) ^ region
        alpha = math.exp(-sum(logd[lid] for lid in paying))
        rho_s = _reduce_square(rho, dims, down)
        x_s = _reduce_square(x, dims, down)
        term = np.trace(rho_s @ x_s).real \
            - (tr_x / tr_rho) * np.trace(rho_s @ rho_s).real
        total += alpha * term
    return 2.0 / tr_rho**2 * total


def hamiltonian_bulk_boundary(
    graph: ColoredGraph,
    spins: dict[str, int],
    config: int,
    bulk_field: dict[int, int] | int = 1,
) -> float:
    """Single-sector energy with a pinning field on the vertices.

    Boundary half-edges pay log(2j+1) when their vertex is swapped,
    internal links when cut, and each vertex pays log of its
    intertwiner dimension when swapped against its bulk field b_x
    (b_x = -1 models the bulk as input).
    """
    total = 0.0
    for k, b in enumerate(graph.boundary):
        if config >> b.vertex & 1:
            total += math.log(dim_rep(spins[f"b{k}"]))
    for k, ln in enumerate(graph.internal):
        if (config >> ln.source & 1) != (config >> ln.target & 1):
            total += math.log(dim_rep(spins[f"i{k}"]))
    for x in range(graph.n_vertices):
        bx = bulk_field if isinstance(bulk_field, int) else bulk_field.get(x, 1)
        sigma = -1 if config >> x & 1 else 1
        if sigma * bx == -1:
            tup = tuple(spins[lid] for lid in graph.links_at(x))
            dim = intertwiner_dimension(tup)
            if dim == 0:
                return math.inf
            total += math.log(dim)
    return total
