"""Turbine group presentations, words and their evaluation in a representation."""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from typing import Mapping

from .linalg import DimensionError, Matrix

__all__ = [
    "PresentationError",
    "WordError",
    "TurbineParams",
    "GroupWord",
    "TurbineRepresentation",
    "RelationCheck",
    "PresentationReport",
    "bezout_rs",
    "evaluate_word",
    "verify_presentation",
    "distinguished_words",
    "twist_representation",
]

DELTA = "d"
OMEGA_0 = "w0"
OMEGA_INF = "winf"


def alpha(i: int) -> str:
    return f"a{i}"


class PresentationError(ValueError):
    pass


class WordError(KeyError):
    pass


def bezout_rs(n: int, k: int) -> tuple[int, int]:
    """The pair (r, s) with r*n = k*s + 1 and 0 <= s < n."""
    if not (n > k >= 1):
        raise PresentationError(f"need n > k >= 1, got n={n}, k={k}")
    if math.gcd(n, k) != 1:
        raise PresentationError(f"n={n} and k={k} are not coprime")
    # k*s = -1 (mod n)
    s = (-pow(k, -1, n)) % n if n > 1 else 0
    r, rem = divmod(k * s + 1, n)
    assert rem == 0
    return r, s


@dataclass(frozen=True)
class TurbineParams:
    n: int
    k: int
    l: int
    shaft: bool = False
    variant: str = "turbine"
    r: int = 0
    s: int = 0

    @classmethod
    def create(cls, n, k, l, shaft=False, variant="turbine", r=None, s=None) -> TurbineParams:
        r0, s0 = bezout_rs(n, k)
        if r is None and s is None:
            r, s = r0, s0
        elif r is None or s is None:
            raise PresentationError("override needs both r and s")
        params = cls(n=n, k=k, l=l, shaft=bool(shaft), variant=variant, r=r, s=s)
        params.check()
        return params

    def check(self) -> None:
        if self.l < 1:
            raise PresentationError("l must be at least 1")
        if self.variant not in ("turbine", "curve"):
            raise PresentationError(f"unknown variant {self.variant!r}")
        bezout_rs(self.n, self.k)
        if self.r * self.n != self.k * self.s + 1:
            raise PresentationError(f"(r, s) = ({self.r}, {self.s}) violates r*n = k*s + 1")

    @property
    def twist(self) -> int:
        """t with (r, s) = canonical + t*(k, n); 0 for the canonical pair."""
        r0, _ = bezout_rs(self.n, self.k)
        t, rem = divmod(self.r - r0, self.k)
        assert rem == 0
        return t

    @property
    def rank(self) -> int:
        return self.k * self.l + (1 if self.shaft else 0)

    def generators(self) -> list[str]:
        gens = [alpha(0)] if self.shaft else []
        gens += [alpha(i) for i in range(1, self.l + 1)]
        return gens + [OMEGA_0, OMEGA_INF, DELTA]

    def twisted(self, t: int) -> TurbineParams:
        return TurbineParams.create(self.n, self.k, self.l, self.shaft, self.variant,
                                    self.r + t * self.k, self.s + t * self.n)


@dataclass(frozen=True)
class GroupWord:
    letters: tuple = ()

    def __post_init__(self):
        for gen, exp in self.letters:
            if not isinstance(exp, int) or exp == 0:
                raise WordError(f"exponent of {gen} must be a nonzero integer")

    @classmethod
    def of(cls, *letters) -> GroupWord:
        return cls(tuple((g, e) for g, e in letters if e != 0))

    def __mul__(self, other: GroupWord) -> GroupWord:
        return GroupWord(self.letters + other.letters)

    def __len__(self):
        return len(self.letters)

    def __str__(self):
        if not self.letters:
            return "1"
        parts = []
        for gen, exp in self.letters:
            if gen.startswith("a") and exp == 1:
                parts.append(gen)
            else:
                parts.append(f"{gen}^{exp}")
        return " ".join(parts)


@dataclass
class TurbineRepresentation:
    params: TurbineParams
    field: object
    images: dict
    m: int = 0
    coefficients: object = dc_field(default=None, repr=False, compare=False)
    conjugator: object = dc_field(default=None, repr=False, compare=False)
    _inverse_cache: dict = dc_field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        sizes = {img.size for img in self.images.values()}
        if len(sizes) != 1:
            raise DimensionError("generator images must share one dimension")
        self.m = sizes.pop()

    def image(self, gen: str) -> Matrix:
        if gen == alpha(0) and not self.params.shaft:
            raise WordError("a0 is only defined for turbines with a shaft")
        try:
            return self.images[gen]
        except KeyError:
            raise WordError(f"generator {gen} has no assigned image") from None

    def inverse_image(self, gen: str) -> Matrix:
        if gen not in self._inverse_cache:
            self._inverse_cache[gen] = self.image(gen).inverse()
        return self._inverse_cache[gen]

    @property
    def alphas(self) -> list[Matrix]:
        return [self.images[alpha(i)] for i in range(1, self.params.l + 1)]

    def to_literals(self) -> dict:
        return {g: self.images[g].to_literals() for g in self.params.generators() if g in self.images}


def evaluate_word(rep: TurbineRepresentation, word: GroupWord) -> Matrix:
    result = Matrix.identity(rep.field, rep.m)
    for gen, exp in word.letters:
        base = rep.image(gen) if exp > 0 else rep.inverse_image(gen)
        result = result * (base ** abs(exp))
    return result


@dataclass
class RelationCheck:
    name: str
    statement: str
    ok: bool


@dataclass
class PresentationReport:
    checks: list

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def __bool__(self):
        return self.ok

    def failures(self) -> list[str]:
        return [c.name for c in self.checks if not c.ok]

    def as_dict(self):
        return {"ok": self.ok, "relations": [{"name": c.name, "statement": c.statement, "ok": c.ok}
                                             for c in self.checks]}


def verify_presentation(rep: TurbineRepresentation) -> PresentationReport:
    p = rep.params
    for gen in p.generators():
        rep.image(gen)
    if any(img.size != rep.m for img in rep.images.values()):
        raise DimensionError("generator images have mismatched sizes")
    w0, winf, d = rep.image(OMEGA_0), rep.image(OMEGA_INF), rep.image(DELTA)
    checks = []

    product = Matrix.identity(rep.field, rep.m)
    for a in rep.alphas:
        product = product * a
    checks.append(RelationCheck("R1", "a1 ... al winf = w0", (product * winf).equals(w0)))

    central = all((d * rep.image(g)).equals(rep.image(g) * d) for g in p.generators() if g != DELTA)
    checks.append(RelationCheck("R2", "d is central", central))

    d_r = d ** p.r
    if p.shaft:
        lhs = rep.image(alpha(0)) * (w0 ** p.k)
        checks.append(RelationCheck("R3", f"a0 w0^{p.k} = d^{p.r}", lhs.equals(d_r)))
    else:
        checks.append(RelationCheck("R3", f"w0^{p.k} = d^{p.r}", (w0 ** p.k).equals(d_r)))

    if p.variant == "curve":
        checks.append(RelationCheck("R4", f"winf^{p.n} = d^{p.s}", (winf ** p.n).equals(d ** p.s)))
    return PresentationReport(checks)


def _conjugate(power: int, inner: GroupWord) -> GroupWord:
    return GroupWord.of((OMEGA_0, power)) * inner * GroupWord.of((OMEGA_0, -power))


def distinguished_words(params: TurbineParams) -> dict:
    """Named words: alpha_inf two ways, and the transversal loop family.

    ``loops`` is a list of ``(label, word)`` in index order: label ``0``
    for the shaft loop, then ``(j, i)`` for j = 0..k-1, i = 1..l.
    """
    k, l = params.k, params.l
    alpha_inf = GroupWord.of((DELTA, params.r), (OMEGA_INF, -k))
    loops = []
    if params.shaft:
        loops.append((0, GroupWord.of((alpha(0), 1))))
    for j in range(k):
        for i in range(1, l + 1):
            loops.append(((j, i), _conjugate(k - 1 - j, GroupWord.of((alpha(i), 1)))))
    factorized = GroupWord()
    for _, w in loops:
        factorized = factorized * w
    return {"alpha_inf": alpha_inf, "alpha_inf_factorized": factorized, "loops": loops}


def twist_representation(rep: TurbineRepresentation, t: int) -> TurbineRepresentation:
    """Replace w0, winf by w0 d^t, winf d^t and (r, s) by (r + t k, s + t n)."""
    d_t = rep.image(DELTA) ** t
    images = dict(rep.images)
    images[OMEGA_0] = rep.image(OMEGA_0) * d_t
    images[OMEGA_INF] = rep.image(OMEGA_INF) * d_t
    return TurbineRepresentation(rep.params.twisted(t), rep.field, images)
