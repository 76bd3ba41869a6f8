"""Finite-field brute force and Monte Carlo validation of the codimension calculus.

Three kinds of evidence live here: exact censuses of rank strata of
symmetric matrices over small prime fields (the oracle for the closed
codimension formula), seeded Monte Carlo estimates of how often a named
regularity condition fails on random data (the stratum heuristic says
the failure fraction is about q^-codim), and a point-counting dimension
oracle over field extensions used to cross-check the Groebner Krull
dimension.

Everything is deterministic: a master seed expands to per-sample
substreams, censuses shard over index ranges and merge by integer
addition, so worker counts never change a result.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import product
from math import comb, log
from typing import Sequence

from .fields import DEFAULT_SAMPLING_PRIME, PrimeField
from .ideals import Budget, BudgetExceeded, Ideal, krull_dim
from .linalg import (
    kernel_basis,
    matrix_rank,
    pencil_square_member,
    quad_to_sym,
    rank_stratum_codim,
    sym_rank,
)
from .poly import (
    LinearSubspace,
    SparsePoly,
    exponents_of_degree,
    linear_form_coeffs,
    restrict_linear,
)
from .regularity import (
    MODE_TOY,
    CheckOptions,
    FamilyParams,
    LocalModel,
    WeightedPoint,
    local_model,
)
from .rng import DEFAULT_SEED, substream, substream_seed

CENSUS_GUARD = 10**8


class SampleError(ValueError):
    pass


@dataclass(frozen=True)
class CensusResult:
    description: str
    ambient_dim: int
    count: int
    q: int
    implied_dim: float
    implied_codim: float

    def to_json(self) -> dict:
        return {
            "description": self.description,
            "ambient_dim": self.ambient_dim,
            "count": self.count,
            "q": self.q,
            "implied_dim": self.implied_dim,
            "implied_codim": self.implied_codim,
        }


def _rank_mod(mat: list[list[int]], q: int) -> int:
    """Row-echelon rank over Z/q; intentionally independent of linalg."""
    m = [row[:] for row in mat]
    nrows, ncols = len(m), len(m[0]) if m else 0
    rank = 0
    for col in range(ncols):
        piv = None
        for r in range(rank, nrows):
            if m[r][col] % q:
                piv = r
                break
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = pow(m[rank][col], q - 2, q)
        m[rank] = [x * inv % q for x in m[rank]]
        for r in range(nrows):
            if r != rank and m[r][col]:
                f = m[r][col]
                m[r] = [(x - f * y) % q for x, y in zip(m[r], m[rank])]
        rank += 1
        if rank == nrows:
            break
    return rank


def _index_to_sym(index: int, n: int, q: int) -> list[list[int]]:
    """Decode a lexicographic index over the upper-triangle entries."""
    mat = [[0] * n for _ in range(n)]
    for i in range(n - 1, -1, -1):
        for j in range(n - 1, i - 1, -1):
            index, v = divmod(index, q)
            mat[i][j] = mat[j][i] = v
    return mat


_census_cache: dict = {}


def rank_census(n: int, q: int, jobs: int = 1) -> dict[int, int]:
    """Exact counts of symmetric n x n matrices over F_q by rank."""
    PrimeField(q)  # validates q
    key = (n, q)
    if key in _census_cache:
        return dict(_census_cache[key])
    total = q ** (n * (n + 1) // 2)
    if total > CENSUS_GUARD:
        raise SampleError(
            f"census of {total} matrices exceeds the brute-force guard {CENSUS_GUARD}"
        )

    def shard(bounds):
        lo, hi = bounds
        counts = [0] * (n + 1)
        for index in range(lo, hi):
            counts[_rank_mod(_index_to_sym(index, n, q), q)] += 1
        return counts

    nshards = max(1, min(jobs, total))
    step = (total + nshards - 1) // nshards
    ranges = [(lo, min(lo + step, total)) for lo in range(0, total, step)]
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(shard, ranges))
    else:
        parts = [shard(r) for r in ranges]
    counts = [sum(p[r] for p in parts) for r in range(n + 1)]
    result = {r: counts[r] for r in range(n + 1)}
    _census_cache[key] = dict(result)
    return result


def count_rank_leq(n: int, r: int, q: int, jobs: int = 1) -> CensusResult:
    """Exact number of symmetric n x n matrices over F_q of rank <= r."""
    if not 0 <= r <= n:
        raise SampleError(f"rank bound r={r} out of range for n={n}")
    census = rank_census(n, q, jobs)
    count = sum(census[k] for k in range(r + 1))
    ambient = n * (n + 1) // 2
    implied_dim = log(count) / log(q) if count > 0 else float("-inf")
    return CensusResult(
        description=f"symmetric {n}x{n} over F_{q} with rank <= {r}",
        ambient_dim=ambient,
        count=count,
        q=q,
        implied_dim=implied_dim,
        implied_codim=ambient - implied_dim,
    )


# -- Monte Carlo estimators -------------------------------------------


def wilson_interval(successes: int, n: int, z: float = 3.0) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    if n <= 0:
        raise SampleError("need a positive sample count")
    phat = successes / n
    denom = 1 + z * z / n
    center = (phat + z * z / (2 * n)) / denom
    half = z * ((phat * (1 - phat) / n + z * z / (4 * n * n)) ** 0.5) / denom
    return (max(0.0, center - half), min(1.0, center + half))


def random_homogeneous(field: PrimeField, nvars: int, degree: int, rng) -> SparsePoly:
    """Dense random form: every coefficient uniform over the field."""
    terms = {exp: rng.randrange(field.p) for exp in exponents_of_degree(nvars, degree)}
    return SparsePoly(field, nvars, terms)


@dataclass(frozen=True)
class SampleResult:
    condition: str
    params: dict
    q: int
    samples: int
    failures: int
    fraction: float
    wilson_low: float
    wilson_high: float
    expected_codim: int
    expected_fraction: float
    seed: int

    def to_json(self) -> dict:
        return {
            "condition": self.condition,
            "params": dict(self.params),
            "q": self.q,
            "samples": self.samples,
            "failures": self.failures,
            "fraction": self.fraction,
            "wilson_low": self.wilson_low,
            "wilson_high": self.wilson_high,
            "expected_codim": self.expected_codim,
            "expected_fraction": self.expected_fraction,
            "seed": self.seed,
        }


def _fail_rank(field: PrimeField, params: dict, rng) -> bool:
    n, r = params["n"], params["r"]
    form = random_homogeneous(field, n, 2, rng)
    return sym_rank(quad_to_sym(form)) <= r


def _fail_membership(field: PrimeField, params: dict, rng) -> bool:
    # failure: a random quadric vanishes on the codim-2 plane {q1 = w1 = 0}
    n = params["M"] + 1
    while True:
        q1 = random_homogeneous(field, n, 1, rng)
        w1 = random_homogeneous(field, n, 1, rng)
        rows = []
        if not q1.is_zero():
            rows.append(linear_form_coeffs(q1))
        if not w1.is_zero():
            rows.append(linear_form_coeffs(w1))
        if len(rows) == 2 and matrix_rank(field, rows) == 2:
            break
    q2 = random_homogeneous(field, n, 2, rng)
    basis = kernel_basis(field, rows, n)
    return restrict_linear(q2, LinearSubspace(field, n, basis)).is_zero()


def _fail_prefix(field: PrimeField, params: dict, rng) -> bool:
    n, d = params["n"], params["d"]
    forms = [random_homogeneous(field, n, k, rng) for k in range(1, d + 1)]
    if any(f.is_zero() for f in forms):
        return True
    try:
        return krull_dim(Ideal(field, n, forms)) != n - d
    except BudgetExceeded:
        return True


def _fail_pencil_square(field: PrimeField, params: dict, rng) -> bool:
    n = params["n"]
    q2 = random_homogeneous(field, n, 2, rng)
    w2 = random_homogeneous(field, n, 2, rng)
    return pencil_square_member(quad_to_sym(q2), quad_to_sym(w2)) is not None


_CONDITIONS = {
    "R2.1-rank": (_fail_rank, lambda p: rank_stratum_codim(p["n"], p["r"]), ("n", "r")),
    "R1.2-membership": (_fail_membership, lambda p: comb(p["M"], 2), ("M",)),
    "R0-prefix-d": (_fail_prefix, lambda p: comb(p["n"], p["d"]), ("n", "d")),
    "pencil-square": (
        _fail_pencil_square,
        lambda p: comb(p["n"] + 1, 2) - p["n"] - 1,
        ("n",),
    ),
}


def estimate_bad_fraction(
    condition: str,
    params: dict,
    q: int,
    samples: int,
    seed: int = DEFAULT_SEED,
    jobs: int = 1,
) -> SampleResult:
    """Monte Carlo estimate of how often the named condition fails.

    The failure predicate is evaluated with the production code paths;
    the expected order of magnitude q^-codim comes from the stratum
    codimension formulas and is attached for comparison.
    """
    if condition not in _CONDITIONS:
        raise SampleError(
            f"unknown condition {condition!r}; choose from {sorted(_CONDITIONS)}"
        )
    if samples <= 0:
        raise SampleError("need a positive number of samples")
    predicate, codim_of, required = _CONDITIONS[condition]
    missing = [k for k in required if k not in params]
    if missing:
        raise SampleError(f"condition {condition!r} needs params {missing}")
    field = PrimeField(q)

    def shard(bounds) -> int:
        lo, hi = bounds
        fails = 0
        for i in range(lo, hi):
            if predicate(field, params, substream(seed, i)):
                fails += 1
        return fails

    nshards = max(1, min(jobs, samples))
    step = (samples + nshards - 1) // nshards
    ranges = [(lo, min(lo + step, samples)) for lo in range(0, samples, step)]
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            failures = sum(pool.map(shard, ranges))
    else:
        failures = sum(shard(r) for r in ranges)
    codim = codim_of(params)
    lo, hi = wilson_interval(failures, samples)
    return SampleResult(
        condition=condition,
        params=dict(params),
        q=q,
        samples=samples,
        failures=failures,
        fraction=failures / samples,
        wilson_low=lo,
        wilson_high=hi,
        expected_codim=codim,
        expected_fraction=q ** (-codim),
        seed=seed,
    )


# -- random on-variety local models (genericity smoke test) ------------


def random_on_v_model(params: FamilyParams, field: PrimeField, rng) -> LocalModel:
    """Random dense pair through a random point of the double cover.

    One coefficient of g (of h) is adjusted so the point lies on the
    hypersurface (on the cover); the rest stay uniform.
    """
    p = field.p
    n_amb = params.ambient_vars
    while True:
        coords = [rng.randrange(p) for _ in range(n_amb)]
        if any(coords):
            break
    u = rng.randrange(p)
    chart = next(j for j, c in enumerate(coords) if c)

    g = random_homogeneous(field, n_amb, params.m, rng)
    exp = [0] * n_amb
    exp[chart] = params.m
    defect = field.div(g.evaluate(coords), field.pow(coords[chart], params.m))
    g = g + SparsePoly(field, n_amb, {tuple(exp): field.neg(defect)})

    h = random_homogeneous(field, n_amb, 2 * params.l, rng)
    exp = [0] * n_amb
    exp[chart] = 2 * params.l
    target = field.sub(field.mul(u, u), h.evaluate(coords))
    adjust = field.div(target, field.pow(coords[chart], 2 * params.l))
    h = h + SparsePoly(field, n_amb, {tuple(exp): adjust})

    point = WeightedPoint.make(field, coords, u)
    return local_model(params, g, h, point)


@dataclass(frozen=True)
class GenericityResult:
    total: int
    passed: int
    by_class: dict
    failures: list
    seed: int
    q: int

    @property
    def fraction(self) -> float:
        return self.passed / self.total if self.total else 0.0

    def to_json(self) -> dict:
        return {
            "total": self.total,
            "passed": self.passed,
            "fraction": self.fraction,
            "by_class": dict(self.by_class),
            "failures": list(self.failures),
            "seed": self.seed,
            "q": self.q,
        }


def genericity_sample(
    Ms: Sequence[int],
    count: int,
    seed: int = DEFAULT_SEED,
    q: int = DEFAULT_SAMPLING_PRIME,
    jobs: int = 1,
    budget_steps: int | None = None,
) -> GenericityResult:
    """Fraction of random on-variety local models passing all toy-mode checks."""
    if count <= 0:
        raise SampleError("need a positive model count")
    field = PrimeField(q)
    from .regularity import check_point  # deferred: keeps module import light

    def one(i: int):
        rng = substream(seed, i)
        M = Ms[i % len(Ms)]
        m = rng.randrange(2, M)  # valid degrees: 2 <= m <= M - 1, l = M + 1 - m
        fam = FamilyParams(M=M, m=m, l=M + 1 - m)
        lm = random_on_v_model(fam, field, rng)
        budget = Budget(budget_steps) if budget_steps else None
        opts = CheckOptions(mode=MODE_TOY, seed=substream_seed(seed, i), budget=budget)
        report = check_point(lm, opts)
        return (i, report.point_class.value, report.overall, _first_failure(report))

    indices = range(count)
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(one, indices))
    else:
        rows = [one(i) for i in indices]
    by_class: dict = {}
    failures = []
    passed = 0
    for i, cls, overall, first_fail in rows:
        by_class[cls] = by_class.get(cls, 0) + 1
        if overall == "pass":
            passed += 1
        else:
            failures.append({"index": i, "class": cls, "overall": overall, "check": first_fail})
    return GenericityResult(
        total=count, passed=passed, by_class=by_class, failures=failures, seed=seed, q=q
    )


def _first_failure(report) -> str | None:
    for name, verdict in report.checks.items():
        if verdict.status in ("fail", "indeterminate"):
            return name
    return None


# -- dimension oracle by point counts over field extensions ------------


def _find_irreducible(p: int, k: int) -> list[int]:
    """Monic irreducible of degree k over F_p (k <= 3: no roots suffices)."""
    if k == 1:
        return [0, 1]
    if k > 3:
        raise SampleError("extension degree > 3 not supported by the oracle")
    for tail in product(range(p), repeat=k):
        coeffs = list(tail) + [1]
        if all(
            sum(c * pow(x, i, p) for i, c in enumerate(coeffs)) % p for x in range(p)
        ):
            return coeffs
    raise SampleError(f"no irreducible of degree {k} over F_{p} found")


class _ExtField:
    """F_{p^k} with all arithmetic in precomputed tables (elements 0..p^k-1)."""

    def __init__(self, p: int, k: int):
        self.p = p
        self.k = k
        self.size = p**k
        modulus = _find_irreducible(p, k)

        def to_poly(e):
            out = []
            for _ in range(k):
                e, r = divmod(e, p)
                out.append(r)
            return out

        def from_poly(cs):
            e = 0
            for c in reversed(cs):
                e = e * p + c % p
            return e

        def polymulmod(a, b):
            out = [0] * (2 * k - 1)
            for i, x in enumerate(a):
                for j, y in enumerate(b):
                    out[i + j] = (out[i + j] + x * y) % p
            for top in range(2 * k - 2, k - 1, -1):
                c = out[top]
                if c:
                    out[top] = 0
                    for i in range(k):
                        out[top - k + i] = (out[top - k + i] - c * modulus[i]) % p
            return out[:k]

        self.add = [
            [from_poly([(x + y) % p for x, y in zip(to_poly(a), to_poly(b))]) for b in range(self.size)]
            for a in range(self.size)
        ]
        self.mul = [
            [from_poly(polymulmod(to_poly(a), to_poly(b))) for b in range(self.size)]
            for a in range(self.size)
        ]

    def embed(self, c: int) -> int:
        return c % self.p

    def pow_table(self, max_exp: int) -> list[list[int]]:
        table = [[1] * (max_exp + 1) for _ in range(self.size)]
        for a in range(self.size):
            for e in range(1, max_exp + 1):
                table[a][e] = self.mul[table[a][e - 1]][a]
        return table


def count_points_ext(I: Ideal, k: int) -> int:
    """Points of V(I) with coordinates in F_{p^k}, by exhaustive evaluation."""
    F = I.field
    if not isinstance(F, PrimeField):
        raise SampleError("point counting needs an ideal over a prime field")
    ext = _ExtField(F.p, k)
    n = I.nvars
    if ext.size**n > CENSUS_GUARD:
        raise SampleError("point count exceeds the brute-force guard")
    maxdeg = max((g.total_degree() for g in I.gens), default=0)
    powers = ext.pow_table(max(1, maxdeg))
    gens = [[(exp, ext.embed(c)) for exp, c in g.terms.items()] for g in I.gens]
    count = 0
    for pt in product(range(ext.size), repeat=n):
        ok = True
        for g in gens:
            total = 0
            for exp, c in g:
                v = c
                for x, e in zip(pt, exp):
                    if e:
                        v = ext.mul[v][powers[x][e]]
                total = ext.add[total][v]
            if total:
                ok = False
                break
        if ok:
            count += 1
    return count


def point_count_dimension(I: Ideal) -> int:
    """Cone dimension from the growth exponent of point counts over F_p, F_{p^2}, F_{p^3}.

    A dimension-d cone with c top-dimensional components contributes about
    c * p^(kd) points over F_{p^k} once k is divisible by the components'
    field-of-definition degree.  F_{p^2} and F_{p^3} are incomparable, so
    both are consulted and the larger exponent wins; the bias log_p(c)/k
    stays below rounding as long as the variety has few components, which
    the oracle corpus is chosen to respect.
    """
    counts = {k: count_points_ext(I, k) for k in (1, 2, 3)}
    if counts[1] == 0:
        return -1  # no points even at the origin: the ideal is the unit ideal
    p = I.field.p
    exponent = max(log(counts[2]) / (2 * log(p)), log(counts[3]) / (3 * log(p)))
    return round(exponent)
