"""Rigidity index, digraph irreducibility certificate and a Burnside oracle."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field as dc_field
from typing import Iterable, Sequence

import numpy as np

from .construct import loop_images
from .group import OMEGA_0, OMEGA_INF, TurbineRepresentation
from .linalg import (DimensionError, EchelonBasis, Matrix, centralizer_dim, is_pseudo_reflection,
                     rank, verify_semisimple_spectrum)
from .pochhammer import check_pochhammer_condition
from .scalar import Cyclotomic

__all__ = [
    "CertificateError",
    "IrreducibilityCertificate",
    "RigidityVerdict",
    "rigidity_index",
    "is_rigid",
    "strongly_connected",
    "irreducibility_certificate",
    "certificate_from_generators",
    "local_monodromies",
    "burnside_oracle",
]


class CertificateError(ValueError):
    pass


def rigidity_index(local_monodromies: Sequence[Matrix], l: int, m: int, spectra=None) -> int:
    """Sum of centralizer dimensions minus ``l * m^2``.

    ``spectra`` optionally lists, per matrix, a claimed semisimple spectrum
    ``[(value, multiplicity), ...]`` (or None); when the claim verifies, the
    Sylvester-rank dimension must equal the sum of squared multiplicities.
    """
    if any(M.size != m for M in local_monodromies):
        raise DimensionError("local monodromies must all have size m")
    dims = [centralizer_dim(M) for M in local_monodromies]
    if spectra is not None:
        for M, spectrum, d in zip(local_monodromies, spectra, dims):
            if spectrum and verify_semisimple_spectrum(M, spectrum).ok:
                closed = sum(mult * mult for _, mult in spectrum)
                if closed != d:
                    raise ArithmeticError(f"centralizer dimension {d} disagrees with {closed}")
    return sum(dims) - l * m * m


@dataclass
class RigidityVerdict:
    status: str
    index: int
    centralizer_dims: list

    @property
    def rigid(self) -> bool:
        return self.status == "rigid"

    def as_dict(self):
        return {"status": self.status, "index": self.index, "centralizer_dims": self.centralizer_dims}


def local_monodromies(rep: TurbineRepresentation) -> list[Matrix]:
    return [rep.image(OMEGA_0), *rep.alphas, rep.image(OMEGA_INF)]


def is_rigid(rep: TurbineRepresentation, irreducible: bool) -> RigidityVerdict:
    """Rigid iff the index is 2; only meaningful for irreducible systems.

    Without a shaft the index criterion is only known to be decisive for
    Pochhammer systems; other inputs yield ``"inconclusive"``.
    """
    if not irreducible:
        raise CertificateError("the rigidity criterion applies to irreducible systems only")
    mats = local_monodromies(rep)
    dims = [centralizer_dim(M) for M in mats]
    index = sum(dims) - rep.params.l * rep.m ** 2
    if not rep.params.shaft:
        loops = [M for _, M in loop_images(rep)]
        pochhammer = all(is_pseudo_reflection(M) is not None for M in loops) and \
            check_pochhammer_condition(loops).ok
        if not pochhammer:
            return RigidityVerdict("inconclusive", index, dims)
    return RigidityVerdict("rigid" if index == 2 else "not rigid", index, dims)


def strongly_connected(vertex_count: int, arcs: Iterable[tuple[int, int]]) -> bool:
    """True iff the digraph has a single strongly connected component."""
    if vertex_count <= 1:
        return True
    adj = [[] for _ in range(vertex_count)]
    for a, b in arcs:
        adj[a].append(b)
    index = [-1] * vertex_count
    low = [0] * vertex_count
    on_stack = [False] * vertex_count
    stack, components, counter = [], 0, 0
    for root in range(vertex_count):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        while work:
            v, i = work[-1]
            if i < len(adj[v]):
                work[-1] = (v, i + 1)
                w = adj[v][i]
                if index[w] == -1:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, 0))
                elif on_stack[w]:
                    low[v] = min(low[v], index[w])
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
            if low[v] == index[v]:
                components += 1
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    if w == v:
                        break
    return components == 1


@dataclass
class IrreducibilityCertificate:
    labels: list
    decompositions: list
    directions: list
    arcs: list
    connected: bool
    product_rank: int
    m: int
    basis_change: Matrix | None = None

    @property
    def invertible(self) -> bool:
        return self.product_rank == self.m

    @property
    def verdict(self) -> bool:
        return self.connected and self.invertible

    def as_dict(self):
        return {
            "vertices": [str(lbl) for lbl in self.labels],
            "directions": self.directions,
            "arcs": [[str(self.labels[a]), str(self.labels[b])] for a, b in self.arcs],
            "strongly_connected": self.connected,
            "rank_I_minus_product": self.product_rank,
            "m": self.m,
            "standard_form_change_of_basis": self.basis_change is not None,
            "verdict": self.verdict,
        }


def certificate_from_generators(generators: Sequence[Matrix], labels=None) -> IrreducibilityCertificate:
    """Digraph certificate for pseudo-reflections, multiplied in the given order."""
    f = generators[0].field
    m = generators[0].size
    labels = list(range(len(generators))) if labels is None else list(labels)
    decs = []
    for lbl, M in zip(labels, generators):
        dec = is_pseudo_reflection(M)
        if dec is None:
            raise CertificateError(f"loop image {lbl} is not a pseudo-reflection")
        decs.append(dec)
    basis_change = None
    if not all(d.standard for d in decs) or len({d.e for d in decs}) != len(decs):
        if len(decs) != m:
            raise CertificateError("standard form needs exactly m pseudo-reflections")
        T = Matrix(f, [d.row(f) for d in decs])
        if rank(T) != m:
            raise CertificateError("reflection rows are dependent; no standard form")
        T_inv = T.inverse()
        generators = [T * M * T_inv for M in generators]
        decs = [is_pseudo_reflection(M) for M in generators]
        if not all(d is not None and d.standard for d in decs):
            raise CertificateError("change of basis did not reach standard form")
        basis_change = T
    directions = [d.e for d in decs]
    arcs = []
    for a, da in enumerate(decs):
        for b, db in enumerate(decs):
            if a != b and not f.is_zero(db.u[da.e]):
                arcs.append((a, b))
    product = Matrix.identity(f, m)
    for M in generators:
        product = product * M
    prod_rank = rank(Matrix.identity(f, m) - product)
    return IrreducibilityCertificate(labels=labels, decompositions=decs, directions=directions,
                                     arcs=arcs, connected=strongly_connected(len(decs), arcs),
                                     product_rank=prod_rank, m=m, basis_change=basis_change)


def irreducibility_certificate(rep: TurbineRepresentation) -> IrreducibilityCertificate:
    loops = loop_images(rep)
    return certificate_from_generators([M for _, M in loops], [lbl for lbl, _ in loops])


# -- Burnside oracle ------------------------------------------------------

def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _prime_factors(n: int) -> list[int]:
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


@dataclass
class _ModularField:
    p: int
    conductor: int
    root: int
    powers: list = dc_field(default_factory=list)


def _modular_field(conductor: int, start: int = 1 << 25) -> _ModularField:
    """A prime p = 1 (mod N) below 2^26 together with an element of order N."""
    p = start - (start % conductor) + 1
    while not _is_prime(p):
        p += conductor
    rng = random.Random(conductor)
    factors = _prime_factors(conductor)
    while True:
        g = rng.randrange(2, p - 1)
        w = pow(g, (p - 1) // conductor, p)
        if all(pow(w, conductor // q, p) != 1 for q in factors) or conductor == 1:
            break
    return _ModularField(p, conductor, w, [pow(w, j, p) for j in range(conductor)])


def _reduce_matrix(M: Matrix, mf: _ModularField):
    p = mf.p
    out = np.zeros((M.nrows, M.ncols), dtype=np.int64)
    for i, row in enumerate(M.rows):
        for j, x in enumerate(row):
            if x.den % p == 0:
                return None
            val = sum(c * mf.powers[t] for t, c in enumerate(x.num)) % p
            out[i, j] = val * pow(x.den, -1, p) % p
    return out


def _modular_span_is_full(mats: list, m: int, p: int) -> bool:
    """Closure of the algebra generated mod p; True iff it reaches m^2."""
    target = m * m
    basis: dict[int, np.ndarray] = {}

    def insert(vec):
        vec = vec.copy()
        for c in sorted(basis):
            if vec[c]:
                vec = (vec - vec[c] * basis[c]) % p
        nz = np.flatnonzero(vec)
        if nz.size == 0:
            return False
        c = int(nz[0])
        vec = vec * pow(int(vec[c]), -1, p) % p
        for other in basis:
            if basis[other][c]:
                basis[other] = (basis[other] - basis[other][c] * vec) % p
        basis[c] = vec
        return True

    ident = np.eye(m, dtype=np.int64)
    queue = [ident]
    insert(ident.reshape(-1))
    while queue and len(basis) < target:
        B = queue.pop()
        for g in mats:
            C = (B @ g) % p
            if insert(C.reshape(-1)):
                queue.append(C)
                if len(basis) == target:
                    return True
    return len(basis) == target


def burnside_oracle(matrices: Sequence[Matrix]) -> bool:
    """True iff the generated algebra is all of M_m (so the action is irreducible).

    The span of words is grown from the identity by right multiplication
    with generators until it stops growing.  In exact mode a reduction
    modulo a prime is tried first; a full span there already proves full
    span over the field.
    """
    mats = list(matrices)
    if not mats:
        raise ValueError("need at least one matrix")
    f = mats[0].field
    m = mats[0].size
    if any(M.size != m for M in mats):
        raise DimensionError("matrices must share a dimension")
    if m == 1:
        return True
    if f.exact and all(isinstance(x, Cyclotomic) for M in mats for r in M.rows for x in r):
        mf = _modular_field(f.conductor)
        reduced = [_reduce_matrix(M, mf) for M in mats]
        if all(r is not None for r in reduced) and _modular_span_is_full(reduced, m, mf.p):
            return True
    return _exact_span_is_full(mats, m)


def _exact_span_is_full(mats: list[Matrix], m: int) -> bool:
    f = mats[0].field
    target = m * m
    basis = EchelonBasis(f)

    def as_vector(M):
        return {i * m + j: x for i, row in enumerate(M.rows) for j, x in enumerate(row)
                if not f.is_zero(x)}

    ident = Matrix.identity(f, m)
    basis.add(as_vector(ident))
    queue = [ident]
    while queue and len(basis) < target:
        B = queue.pop()
        for g in mats:
            C = B * g
            if basis.add(as_vector(C)):
                queue.append(C)
                if len(basis) == target:
                    return True
    return len(basis) == target
