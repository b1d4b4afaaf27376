"""Constrained Tverberg partitions of rational point configurations (affine maps only).

Point indices are 0-based positions in ``PointConfiguration.points``.  A face
cap ``c`` bounds the dimension of a face, so the face has at most ``c + 1``
vertices.
"""
from __future__ import annotations

import itertools
import math
import random
from collections.abc import Iterator, Sequence
from dataclasses import dataclass
from fractions import Fraction

from .complex import ResourceLimitError
from .lp import feasible_point

DEFAULT_LP_LIMIT = 10**8
COORD_BOUND = 1000


def parse_rational(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("floats are not accepted; pass ints, Fractions or 'p/q' strings")
    return Fraction(x)


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class PointConfiguration:
    d: int
    points: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        pts = tuple(tuple(parse_rational(c) for c in p) for p in self.points)
        object.__setattr__(self, "points", pts)
        if self.d < 1:
            raise ValueError("dimension must be positive")
        for p in pts:
            if len(p) != self.d:
                raise ValueError(f"point {p} does not have {self.d} coordinates")

    @classmethod
    def of(cls, points: Sequence[Sequence]) -> PointConfiguration:
        points = [tuple(p) for p in points]
        if not points:
            raise ValueError("no points")
        return cls(len(points[0]), tuple(points))

    @property
    def N(self) -> int:
        return len(self.points) - 1

    def to_json(self) -> dict:
        return {"d": self.d, "points": [[format_rational(c) for c in p] for p in self.points]}

    @classmethod
    def from_json(cls, data: dict) -> PointConfiguration:
        return cls(int(data["d"]), tuple(tuple(Fraction(c) for c in p) for p in data["points"]))

    def in_general_position(self) -> bool:
        """No ``min(d, N) + 1`` of the points are affinely dependent."""
        size = min(self.d, self.N) + 1
        for subset in itertools.combinations(self.points, size):
            base = subset[0]
            rows = [[c - b for c, b in zip(p, base)] for p in subset[1:]]
            if matrix_rank(rows) < size - 1:
                return False
        return True

    def transform(self, matrix: Sequence[Sequence], shift: Sequence) -> PointConfiguration:
        """Image under ``x -> M x + t``."""
        M = [[Fraction(v) for v in row] for row in matrix]
        t = [Fraction(v) for v in shift]
        pts = tuple(
            tuple(sum((M[i][j] * p[j] for j in range(self.d)), Fraction(0)) + t[i] for i in range(len(M)))
            for p in self.points
        )
        return PointConfiguration(len(M), pts)


def matrix_rank(rows: Sequence[Sequence]) -> int:
    m = [[Fraction(v) for v in row] for row in rows]
    r = 0
    ncols = len(m[0]) if m else 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        for i in range(r + 1, len(m)):
            f = m[i][c] / m[r][c]
            if f:
                for j in range(c, ncols):
                    m[i][j] -= f * m[r][j]
        r += 1
    return r


def random_configuration(n_points: int, d: int, rng: random.Random, bound: int = COORD_BOUND) -> PointConfiguration:
    """Integer points in ``[-bound, bound]^d`` in general position (resampled until they are)."""
    while True:
        pts = tuple(tuple(Fraction(rng.randint(-bound, bound)) for _ in range(d)) for _ in range(n_points))
        config = PointConfiguration(d, pts)
        if config.in_general_position():
            return config


def trial_rng(seed: int, trial: int) -> random.Random:
    return random.Random(f"{seed}:{trial}")


@dataclass(frozen=True)
class DimensionProfile:
    """``r`` parts; ``s`` of them may have dimension ``k + 1``, the rest dimension ``k``."""

    r: int
    k: int
    s: int

    def __post_init__(self):
        if self.r < 2:
            raise ValueError("need at least two parts")
        if self.k < 0:
            raise ValueError("k must be nonnegative")
        if not 0 <= self.s < self.r:
            raise ValueError("need 0 <= s < r")

    @property
    def nu(self) -> int:
        return self.k + 1

    @property
    def caps(self) -> tuple[int, ...]:
        return (self.k + 1,) * self.s + (self.k,) * (self.r - self.s)

    def n_min(self, d: int) -> int:
        return (self.r - 1) * (d + 2)

    def admissible(self, d: int) -> bool:
        return self.r * self.k + self.s >= (self.r - 1) * d

    def tight(self, d: int) -> bool:
        return self.r * self.k + self.s == (self.r - 1) * d

    def to_json(self, d: int | None = None) -> dict:
        out = {"r": self.r, "k": self.k, "s": self.s, "nu": self.nu}
        if d is not None:
            out.update({"N_min": self.n_min(d), "admissible": self.admissible(d), "tight": self.tight(d)})
        return out


def reduce_to_tight(profile: DimensionProfile, d: int) -> DimensionProfile:
    """The profile with ``r k' + s' = (r - 1) d``; its caps never exceed the original ones."""
    if not profile.admissible(d):
        raise ValueError(f"r k + s = {profile.r * profile.k + profile.s} < (r-1) d = {(profile.r - 1) * d}")
    k, s = divmod((profile.r - 1) * d, profile.r)
    out = DimensionProfile(profile.r, k, s)
    assert k < profile.k or (k == profile.k and s <= profile.s)
    return out


@dataclass(frozen=True)
class AdmissibleTuple:
    d: int
    dims: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "dims", tuple(int(x) for x in self.dims))
        if self.d < 1:
            raise ValueError("d must be positive")
        if len(self.dims) < 2:
            raise ValueError("need at least two dimensions")
        if any(x < 0 for x in self.dims):
            raise ValueError("dimensions must be nonnegative")

    @property
    def admissible(self) -> bool:
        d = self.d
        return all(d // 2 <= x <= d for x in self.dims) and sum(d - x for x in self.dims) <= d

    @property
    def balanced(self) -> bool:
        return max(self.dims) - min(self.dims) <= 1


def balanced_profile(t: AdmissibleTuple) -> DimensionProfile:
    """``(r, k, s)`` with ``k = min dims`` and ``s`` the number of parts of dimension ``k + 1``."""
    if not t.balanced:
        raise ValueError(f"{t.dims} is not balanced")
    k = min(t.dims)
    return DimensionProfile(len(t.dims), k, sum(1 for x in t.dims if x == k + 1))


def check_admissible(t: AdmissibleTuple) -> dict:
    r = len(t.dims)
    out = {
        "d": t.d,
        "dims": list(t.dims),
        "admissible": t.admissible,
        "balanced": t.balanced,
        "prescribable": False,
        "N_used": (r - 1) * (t.d + 2),
    }
    if t.balanced:
        profile = balanced_profile(t)
        out["k"], out["s"] = profile.k, profile.s
        out["prescribable"] = t.admissible and profile.admissible(t.d)
    return out


@dataclass(frozen=True)
class TverbergPartition:
    faces: tuple[tuple[int, ...], ...]
    witness: tuple[Fraction, ...]
    coefficients: tuple[tuple[Fraction, ...], ...]

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(len(f) - 1 for f in self.faces)

    def check(self, config: PointConfiguration, caps: Sequence[int] | None = None) -> bool:
        """Exact re-verification of disjointness, weights and the common point."""
        seen: set[int] = set()
        for face in self.faces:
            if seen & set(face):
                return False
            seen |= set(face)
        if caps is not None and not caps_respected(self.dims, caps):
            return False
        for face, lam in zip(self.faces, self.coefficients):
            if len(face) != len(lam) or any(x < 0 for x in lam) or sum(lam) != 1:
                return False
            point = tuple(sum((l * config.points[v][c] for v, l in zip(face, lam)), Fraction(0)) for c in range(config.d))
            if point != self.witness:
                return False
        return True

    def to_json(self) -> dict:
        return {
            "faces": [list(f) for f in self.faces],
            "dims": list(self.dims),
            "witness": [format_rational(x) for x in self.witness],
            "weights": [[format_rational(x) for x in lam] for lam in self.coefficients],
        }


def caps_respected(dims: Sequence[int], caps: Sequence[int]) -> bool:
    """Some matching of parts to caps has every dimension within its cap."""
    return all(a <= b for a, b in zip(sorted(dims, reverse=True), sorted(caps, reverse=True)))


def hulls_intersect(point_sets: Sequence[Sequence[Sequence]]) -> tuple[tuple[Fraction, ...], list[list[Fraction]]] | None:
    """A common point of the convex hulls with its convex weights, or ``None``."""
    if not point_sets or any(not ps for ps in point_sets):
        raise ValueError("every point set must be nonempty")
    sets = [[tuple(parse_rational(c) for c in p) for p in ps] for ps in point_sets]
    d = len(sets[0][0])
    if any(len(p) != d for ps in sets for p in ps):
        raise ValueError("dimension mismatch")
    r = len(sets)
    offsets = list(itertools.accumulate((len(ps) for ps in sets), initial=0))
    nvars = offsets[-1]
    A: list[list[Fraction]] = []
    b: list[Fraction] = []
    for i in range(r):
        row = [Fraction(0)] * nvars
        for j in range(len(sets[i])):
            row[offsets[i] + j] = Fraction(1)
        A.append(row)
        b.append(Fraction(1))
    for i in range(1, r):
        for c in range(d):
            row = [Fraction(0)] * nvars
            for j, p in enumerate(sets[0]):
                row[j] = p[c]
            for j, p in enumerate(sets[i]):
                row[offsets[i] + j] = -p[c]
            A.append(row)
            b.append(Fraction(0))
    x = feasible_point(A, b)
    if x is None:
        return None
    weights = [x[offsets[i]:offsets[i + 1]] for i in range(r)]
    witness = tuple(sum((l * p[c] for l, p in zip(weights[0], sets[0])), Fraction(0)) for c in range(d))
    return witness, weights


# -- enumeration of face tuples --------------------------------------------


def _size_vectors(caps: Sequence[int], n_points: int) -> list[tuple[int, ...]]:
    """Vertex counts per part: as large as the caps and the point count allow.

    A tuple whose hulls meet stays intersecting when vertices are added, so
    it suffices to look at tuples where no further vertex can be added.
    """
    full = [c + 1 for c in caps]
    total = min(n_points, sum(full))
    out = [
        sizes
        for sizes in itertools.product(*(range(f, 0, -1) for f in full))
        if sum(sizes) == total
    ]
    return out


def face_tuples(caps: Sequence[int], n_points: int) -> Iterator[tuple[tuple[int, ...], ...]]:
    """Unordered tuples of disjoint faces with ``|face_i| - 1 <= caps_i``, lexicographic order.

    Parts sharing a cap are interchangeable, so within such a group the faces
    appear in increasing ``(-size, vertices)`` order.
    """
    caps = sorted(caps, reverse=True)
    r = len(caps)
    for sizes in _size_vectors(caps, n_points):
        yield from _tuples_with_sizes(caps, sizes, n_points, r)


def _tuples_with_sizes(caps, sizes, n_points, r):
    acc: list[tuple[int, ...]] = []

    def rec(i: int, free: tuple[int, ...]):
        if i == r:
            yield tuple(acc)
            return
        for face in itertools.combinations(free, sizes[i]):
            if i and caps[i] == caps[i - 1] and (-sizes[i], face) <= (-sizes[i - 1], acc[-1]):
                continue
            acc.append(face)
            rest = tuple(v for v in free if v not in face)
            yield from rec(i + 1, rest)
            acc.pop()

    yield from rec(0, tuple(range(n_points)))


def face_tuple_bound(caps: Sequence[int], n_points: int) -> int:
    """Number of ordered tuples over all size vectors (an upper bound on LP calls)."""
    total = 0
    for sizes in _size_vectors(sorted(caps, reverse=True), n_points):
        rest = n_points - sum(sizes)
        total += math.factorial(n_points) // (math.prod(math.factorial(c) for c in sizes) * math.factorial(rest))
    return total


@dataclass
class SearchResult:
    partition: TverbergPartition | None
    lp_calls: int
    caps: tuple[int, ...]
    below_threshold: bool = False

    @property
    def found(self) -> bool:
        return self.partition is not None

    @property
    def exact_dims(self) -> bool:
        """Every face has exactly its cap dimension (not just at most)."""
        if self.partition is None:
            return False
        return sorted(self.partition.dims, reverse=True) == sorted(self.caps, reverse=True)

    def to_json(self) -> dict:
        out = {
            "found": self.found,
            "lp_calls": self.lp_calls,
            "caps": list(self.caps),
            "caps_satisfied": self.found,
            "exact_dims": self.exact_dims,
            "below_threshold": self.below_threshold,
        }
        if self.partition is not None:
            out["partition"] = self.partition.to_json()
        return out


def _caps_of(profile) -> tuple[int, ...]:
    if isinstance(profile, DimensionProfile):
        return profile.caps
    caps = tuple(int(c) for c in profile)
    if len(caps) < 2 or any(c < 0 for c in caps):
        raise ValueError(f"bad caps {caps}")
    return caps


def search_partition(
    config: PointConfiguration, profile: DimensionProfile | Sequence[int], limit: int = DEFAULT_LP_LIMIT
) -> SearchResult:
    """First intersecting face tuple in enumeration order, or an exhausted result."""
    caps = _caps_of(profile)
    n_points = len(config.points)
    if len(caps) > n_points:
        return SearchResult(None, 0, caps, True)
    bound = face_tuple_bound(caps, n_points)
    if bound > limit:
        raise ResourceLimitError(f"up to {bound} LP calls exceed the limit {limit}")
    below = isinstance(profile, DimensionProfile) and config.N < profile.n_min(config.d)
    calls = 0
    for faces in face_tuples(caps, n_points):
        calls += 1
        hit = hulls_intersect([[config.points[v] for v in face] for face in faces])
        if hit is not None:
            witness, weights = hit
            part = TverbergPartition(faces, witness, tuple(tuple(w) for w in weights))
            return SearchResult(part, calls, caps, below)
    return SearchResult(None, calls, caps, below)


@dataclass
class TrialReport:
    profile: DimensionProfile
    d: int
    N: int
    seed: int
    found: int
    trials: int
    exact_dims: int
    lp_calls: int
    failures: list[int]

    def to_json(self) -> dict:
        return {
            "profile": self.profile.to_json(self.d),
            "d": self.d,
            "N": self.N,
            "seed": self.seed,
            "trials": self.trials,
            "found": self.found,
            "exhausted": self.trials - self.found,
            "exact_dims": self.exact_dims,
            "lp_calls": self.lp_calls,
            "failed_trials": self.failures,
        }


def _one_trial(args) -> tuple[bool, bool, int]:
    profile, d, N, seed, t = args
    config = random_configuration(N + 1, d, trial_rng(seed, t))
    res = search_partition(config, profile)
    if res.partition is not None:
        assert res.partition.check(config, profile.caps)
    return res.found, res.exact_dims, res.lp_calls


def run_trials(
    profile: DimensionProfile, d: int, trials: int, seed: int, N: int | None = None, threads: int = 1
) -> TrialReport:
    """Search on ``trials`` seeded random configurations; results do not depend on ``threads``."""
    N = profile.n_min(d) if N is None else N
    jobs = [(profile, d, N, seed, t) for t in range(trials)]
    if threads > 1 and trials > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(threads) as pool:
            results = list(pool.map(_one_trial, jobs, chunksize=max(1, trials // (4 * threads))))
    else:
        results = [_one_trial(j) for j in jobs]
    found = sum(1 for f, _, _ in results if f)
    return TrialReport(
        profile, d, N, seed, found, trials,
        sum(1 for _, e, _ in results if e),
        sum(c for _, _, c in results),
        [t for t, (f, _, _) in enumerate(results) if not f],
    )


def codimension_necessity_check(
    profile: DimensionProfile, d: int, trials: int, seed: int = 0, N: int | None = None, threads: int = 1
) -> TrialReport:
    """Searches where ``r k + s < (r - 1) d``; generic configurations should give no partition."""
    if profile.admissible(d):
        raise ValueError("profile satisfies r k + s >= (r-1) d; nothing to test")
    return run_trials(profile, d, trials, seed, N, threads)
