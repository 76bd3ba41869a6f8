"""Local models of a double hypersurface at a point and the regularity checks.

Given a pair (g, h) of degrees (m, 2l) in M+2 homogeneous coordinates
and a point o = [o' :_l u] of the weighted projective space with
g(o') = 0 and u^2 = h(o'), the local model centers affine coordinates at
the image point: g decomposes as q_1 + ... + q_m and h as
w_0 + w_1 + ... + w_{2l}, with components homogeneous in the M+1 chart
coordinates.  The double cover is locally cut out by the pair of
equations (sum of the q_i, -y^2 + sum of the w_j).

Points are classified by the shape of the low-degree components, and
each class carries its own regularity condition.  Verdicts are
three-valued: budgeted or randomized computations report "indeterminate"
rather than guessing.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from typing import Mapping, Sequence

from .fields import Field
from .ideals import Budget, BudgetExceeded, is_regular_sequence, smooth_complete_intersection
from .linalg import (
    kernel_basis,
    pencil_low_rank_member,
    pencil_square_member,
    quad_to_sym,
    restrict_rank,
    sym_rank,
)
from .poly import (
    LinearSubspace,
    PolyError,
    SparsePoly,
    homogeneous_components,
    linear_form_coeffs,
    linear_forms_independent,
    restrict_linear,
)
from .rng import DEFAULT_SEED, substream

MODE_STRICT = "strict"
MODE_TOY = "toy"

#: rank thresholds from the singular-point conditions
RANK_THRESHOLD_R21 = 7
RANK_THRESHOLD_R22 = 6
RANK_THRESHOLD_R23 = 7

#: slice dimension for the bi-quadratic condition
BIQUADRATIC_SLICE_DIM = 11

CONDITION_NAMES = ("R0.1", "R0.2", "R1.1", "R1.2", "R2.1", "R2.2", "R2.3", "R2^2")


class RegularityError(ValueError):
    pass


class PointClass(Enum):
    NON_SINGULAR_OFF_RAM = "NonSingularOffRam"
    NON_SINGULAR_ON_RAM = "NonSingularOnRam"
    QUADRATIC_OFF_RAM = "QuadraticOffRam"
    QUADRATIC_ON_RAM_G_SMOOTH = "QuadraticOnRamGSmooth"
    QUADRATIC_ON_RAM_G_SING = "QuadraticOnRamGSing"
    BI_QUADRATIC = "BiQuadratic"
    DEGENERATE = "Degenerate"


PASS = "pass"
FAIL = "fail"
INDETERMINATE = "indeterminate"
NOT_APPLICABLE = "not-applicable"


@dataclass(frozen=True)
class Verdict:
    status: str
    witness: dict | None = None

    def to_json(self) -> dict:
        out = {"verdict": self.status}
        if self.witness is not None:
            out["witness"] = self.witness
        return out


@dataclass(frozen=True)
class FamilyParams:
    """Family parameters: dimension M, degree m of g, half-degree l of h."""

    M: int
    m: int
    l: int

    def __post_init__(self):
        if self.m < 2 or self.l < 2:
            raise RegularityError("need m >= 2 and l >= 2")
        if self.m + self.l != self.M + 1:
            raise RegularityError(
                f"m + l must equal M + 1 (got {self.m} + {self.l} != {self.M} + 1)"
            )
        if self.M < 3:
            raise RegularityError("M >= 3 required even in toy mode")

    @property
    def ambient_vars(self) -> int:
        return self.M + 2

    @property
    def local_vars(self) -> int:
        return self.M + 1


@dataclass(frozen=True)
class WeightedPoint:
    """A point [coords :_l u] of the weighted projective space."""

    coords: tuple
    u: object

    @classmethod
    def make(cls, field: Field, coords: Sequence, u) -> "WeightedPoint":
        pt = cls(tuple(field.coerce(c) for c in coords), field.coerce(u))
        if all(field.is_zero(c) for c in pt.coords):
            raise RegularityError(
                "the point with all weight-1 coordinates zero lies on no double hypersurface"
            )
        return pt


@dataclass(frozen=True)
class LocalModel:
    """Point-centered data: components q_1..q_m of g and w_0..w_{2l} of h.

    q[i] is the degree-(i+1) component (possibly zero), w[j] the
    degree-j component; all live in M+1 chart coordinates.  The extra
    cover coordinate y is implicit: the second local equation is
    -y^2 + w_0 + w_1 + ... .
    """

    params: FamilyParams
    field: Field
    q: tuple
    w: tuple
    chart: int = 0
    point: WeightedPoint | None = None

    def __post_init__(self):
        n = self.params.local_vars
        if len(self.q) != self.params.m:
            raise RegularityError(f"expected {self.params.m} components of g")
        if len(self.w) != 2 * self.params.l + 1:
            raise RegularityError(f"expected {2 * self.params.l + 1} components of h")
        for d, comp in enumerate(self.q, start=1):
            self._check_component(comp, d, n, "q")
        for j, comp in enumerate(self.w):
            self._check_component(comp, j, n, "w")

    def _check_component(self, comp: SparsePoly, d: int, n: int, name: str):
        if comp.field != self.field or comp.nvars != n:
            raise RegularityError(f"component {name}_{d} lives in the wrong ring")
        if not comp.is_zero() and (not comp.is_homogeneous() or comp.total_degree() != d):
            raise RegularityError(f"component {name}_{d} is not homogeneous of degree {d}")

    def q_comp(self, d: int) -> SparsePoly:
        return self.q[d - 1]

    def w_comp(self, j: int) -> SparsePoly:
        return self.w[j]

    @property
    def w0_value(self):
        w0 = self.w[0]
        return self.field.zero if w0.is_zero() else w0.leading()[1]

    @property
    def on_ramification(self) -> bool:
        return self.field.is_zero(self.w0_value)


def local_model(
    params: FamilyParams, g: SparsePoly, h: SparsePoly, o: WeightedPoint
) -> LocalModel:
    """Build the local model of (g, h) at a point of the double cover.

    Selects the first chart coordinate where o is nonzero, rescales the
    point so that coordinate equals 1 (u rescales with weight l), recenters
    affine coordinates at the point and splits into homogeneous components.
    """
    F = g.field
    n_amb = params.ambient_vars
    if h.field != F:
        raise RegularityError("g and h must share a coefficient field")
    if g.nvars != n_amb or h.nvars != n_amb:
        raise RegularityError(f"g and h must live in {n_amb} variables")
    if g.is_zero() or not g.is_homogeneous() or g.total_degree() != params.m:
        raise RegularityError(f"g must be homogeneous of degree m = {params.m}")
    if h.is_zero() or not h.is_homogeneous() or h.total_degree() != 2 * params.l:
        raise RegularityError(f"h must be homogeneous of degree 2l = {2 * params.l}")
    if len(o.coords) != n_amb:
        raise RegularityError(f"point must have {n_amb} weight-1 coordinates")

    chart = next((j for j, c in enumerate(o.coords) if not F.is_zero(c)), None)
    if chart is None:
        raise RegularityError(
            "the point with all weight-1 coordinates zero lies on no double hypersurface"
        )
    if not F.is_zero(g.evaluate(o.coords)):
        raise RegularityError("point not on V: g(o') != 0")
    if h.evaluate(o.coords) != F.mul(o.u, o.u):
        raise RegularityError("point not on V: u^2 != h(o')")

    scale = F.inv(o.coords[chart])
    rep = [F.mul(scale, c) for c in o.coords]
    rep_u = F.mul(F.pow(scale, params.l), o.u)

    n_loc = params.local_vars
    images = []
    k = 0
    for i in range(n_amb):
        if i == chart:
            images.append(SparsePoly.constant(F, n_loc, 1))
        else:
            var = SparsePoly.variable(F, n_loc, k)
            images.append(var + SparsePoly.constant(F, n_loc, rep[i]))
            k += 1

    def components(f: SparsePoly, top: int) -> list[SparsePoly]:
        comps = homogeneous_components(f.compose(images))
        comps += [SparsePoly.zero(F, n_loc)] * (top + 1 - len(comps))
        return comps

    gc = components(g, params.m)
    hc = components(h, 2 * params.l)
    if not gc[0].is_zero():
        raise RegularityError("internal: constant term of recentred g did not vanish")
    w0 = hc[0].evaluate([F.zero] * n_loc) if not hc[0].is_zero() else F.zero
    if w0 != F.mul(rep_u, rep_u):
        raise RegularityError("internal: w_0 disagrees with the square of the cover coordinate")
    return LocalModel(
        params=params,
        field=F,
        q=tuple(gc[1 : params.m + 1]),
        w=tuple(hc[: 2 * params.l + 1]),
        chart=chart,
        point=o,
    )


def find_proportionality(q1: SparsePoly, w1: SparsePoly):
    """The scalar lam with w1 = lam * q1 (q1 nonzero, w1 in its span)."""
    F = q1.field
    if w1.is_zero():
        return F.zero
    exp, c = q1.leading()
    lam = F.div(w1.coefficient(exp), c)
    if w1 != q1.scale(lam):
        raise RegularityError("w1 is not proportional to q1")
    return lam


def classify_point(lm: LocalModel) -> PointClass:
    """Sort a local model into the point taxonomy (one class per model)."""
    F = lm.field
    q1, q2 = lm.q_comp(1), lm.q_comp(2)
    w1 = lm.w_comp(1)
    if not lm.on_ramification:
        if not q1.is_zero():
            return PointClass.NON_SINGULAR_OFF_RAM
        if not q2.is_zero():
            return PointClass.QUADRATIC_OFF_RAM
        return PointClass.DEGENERATE
    # on the ramification divisor: w_0 = 0
    if not q1.is_zero():
        if not w1.is_zero() and linear_forms_independent([q1, w1]):
            return PointClass.NON_SINGULAR_ON_RAM
        return PointClass.QUADRATIC_ON_RAM_G_SMOOTH
    if not w1.is_zero():
        return PointClass.QUADRATIC_ON_RAM_G_SING
    return PointClass.BI_QUADRATIC


@dataclass(frozen=True)
class CheckOptions:
    mode: str = MODE_STRICT
    subspace_dim: int | None = None
    trials: int = 3
    seed: int = DEFAULT_SEED
    budget: Budget | None = None
    jobs: int = 1
    basis_bound: int = 5  # random subspace entries drawn from [-bound, bound]

    def __post_init__(self):
        if self.mode not in (MODE_STRICT, MODE_TOY):
            raise RegularityError(f"unknown mode {self.mode!r}")
        if self.trials < 1:
            raise RegularityError("need at least one trial")
        if self.jobs < 1:
            raise RegularityError("jobs must be positive")

    def make_budget(self) -> Budget:
        return self.budget if self.budget is not None else Budget()


def rank_threshold(paper_value: int, M: int, mode: str) -> int:
    """Strict mode keeps the stated threshold; toy mode caps it at M - 3."""
    if mode == MODE_STRICT:
        return paper_value
    return min(paper_value, M - 3)


def default_slice_dim(M: int, mode: str) -> int:
    del mode  # same rule either way: the cap only bites for small M
    return min(BIQUADRATIC_SLICE_DIM, M + 2)


@dataclass(frozen=True)
class RegularityReport:
    point_class: PointClass
    checks: Mapping[str, Verdict]
    overall: str
    mode: str
    seed: int

    def to_json(self) -> dict:
        return {
            "class": self.point_class.value,
            "checks": {name: v.to_json() for name, v in self.checks.items()},
            "overall": self.overall,
            "mode": self.mode,
            "seed": self.seed,
        }

    @property
    def exit_code(self) -> int:
        if self.overall == PASS:
            return 0
        if self.overall == FAIL:
            return 1
        return 2


def check_R0(lm: LocalModel, budget: Budget | None = None) -> tuple[str, Verdict]:
    """Regularity of the component sequence of g at the point.

    With q_1 nonzero the full sequence q_1..q_m must be regular (R0.1);
    with q_1 zero the point is at worst quadratic only if q_2 is nonzero,
    and then q_2..q_m must be regular (R0.2).
    """
    budget = budget or Budget()
    q1 = lm.q_comp(1)
    if not q1.is_zero():
        name, seq, offset = "R0.1", list(lm.q), 0
    else:
        if lm.q_comp(2).is_zero():
            return "R0.2", Verdict(
                FAIL, {"reason": "q1 and q2 both vanish (worse than quadratic)"}
            )
        name, seq, offset = "R0.2", list(lm.q)[1:], 1
    try:
        verdict = is_regular_sequence(seq, budget)
    except BudgetExceeded as exc:
        return name, Verdict(INDETERMINATE, {"reason": str(exc)})
    if verdict.is_regular:
        return name, Verdict(PASS)
    failing_degree = verdict.failing_index + offset
    return name, Verdict(
        FAIL,
        {
            "failing_index": verdict.failing_index,
            "failing_degree": failing_degree,
            "reason": verdict.reason,
        },
    )


def _embed(f: SparsePoly, extra: int) -> SparsePoly:
    return SparsePoly._raw(
        f.field, f.nvars + extra, {exp + (0,) * extra: c for exp, c in f.terms.items()}
    )


def _random_subspace(F: Field, ambient: int, s: int, rng, bound: int) -> LinearSubspace:
    while True:
        vecs = [[rng.randint(-bound, bound) for _ in range(ambient)] for _ in range(s)]
        try:
            return LinearSubspace(F, ambient, vecs)
        except PolyError:
            continue


def check_R22(lm: LocalModel, opts: CheckOptions) -> Verdict:
    """The bi-quadratic condition: a general slice of {q_2 = y^2 - w_2 = 0}
    of the chosen dimension is a smooth codimension-2 complete intersection.

    Structural obstructions that no slice can avoid are detected exactly
    and fail immediately: q_2 zero, q_2 of rank <= 2 (a product of linear
    forms), some pencil member w_2 - lam*q_2 a square of a linear form,
    or a pencil member of rank <= s - 3 in the z,y coordinates.  One
    passing random slice certifies the condition (smoothness of slices is
    open on the Grassmannian); if all trials fail without a structural
    cause the verdict is indeterminate.
    """
    M = lm.params.M
    s = opts.subspace_dim if opts.subspace_dim is not None else default_slice_dim(M, opts.mode)
    if not 4 <= s <= min(BIQUADRATIC_SLICE_DIM, M + 2):
        raise RegularityError(
            f"slice dimension {s} outside [4, {min(BIQUADRATIC_SLICE_DIM, M + 2)}]"
        )
    F = lm.field
    q2, w2 = lm.q_comp(2), lm.w_comp(2)
    if q2.is_zero():
        return Verdict(FAIL, {"mode": "q2-zero", "reason": "q2 vanishes identically"})
    Q = quad_to_sym(q2)
    W = quad_to_sym(w2)
    rank_q2 = sym_rank(Q)
    if rank_q2 <= 2:
        return Verdict(
            FAIL,
            {
                "mode": "reducible-quadric",
                "rank": rank_q2,
                "reason": "q2 is a product of linear forms",
            },
        )
    square = pencil_square_member(Q, W)
    if square is not None:
        return Verdict(
            FAIL,
            {
                "mode": "square-pencil",
                "reason": "some w2 - lambda*q2 is a square of a linear form",
                **square,
            },
        )
    # pencil members lam1*q2 + lam2*(y^2 - w2): rank <= s - 3 makes every
    # s-dimensional slice singular (the member's vertex meets the slice in
    # a >= 2-plane, and two quadrics on it always have a common point)
    tau = s - 3
    screen_inconclusive = False
    if rank_q2 <= tau:
        return Verdict(
            FAIL,
            {"mode": "rank-pencil", "lambda": "infinity", "rank": rank_q2, "bound": tau},
        )
    found, wit = pencil_low_rank_member(Q, W, tau - 1)
    if found:
        low = dict(wit or {})
        low_rank_info = {"mode": "rank-pencil", "bound": tau, **low}
        return Verdict(FAIL, low_rank_info)
    if found is None:
        screen_inconclusive = True

    n_amb = M + 2  # z coordinates plus the cover coordinate y (last slot)
    q2e = _embed(q2, 1)
    y = SparsePoly.variable(F, n_amb, n_amb - 1)
    second = y * y - _embed(w2, 1)

    def run_trial(k: int):
        rng = substream(opts.seed, k)
        P = _random_subspace(F, n_amb, s, rng, opts.basis_bound)
        y_zero = all(F.is_zero(vec[n_amb - 1]) for vec in P.basis)
        try:
            rep = smooth_complete_intersection(
                [restrict_linear(q2e, P), restrict_linear(second, P)], opts.make_budget()
            )
        except BudgetExceeded as exc:
            return ("budget", str(exc), y_zero)
        if rep.ok:
            return ("pass", None, y_zero)
        return ("fail", {"correct_codim": rep.correct_codim, "smooth": rep.smooth}, y_zero)

    if opts.jobs > 1:
        with ThreadPoolExecutor(max_workers=opts.jobs) as pool:
            outcomes = list(pool.map(run_trial, range(opts.trials)))
    else:
        outcomes = []
        for k in range(opts.trials):
            outcomes.append(run_trial(k))
            if outcomes[-1][0] == "pass":
                break

    for k, (status, _, y_zero) in enumerate(outcomes):
        if status == "pass":
            return Verdict(
                PASS,
                {"trial": k, "subspace_dim": s, "y_restricted_to_zero": y_zero},
            )
    budget_hit = any(status == "budget" for status, _, _ in outcomes)
    reason = (
        "all slice trials failed smoothness with no structural obstruction detected"
    )
    if budget_hit:
        reason = "computation budget exceeded during slice trials"
    elif screen_inconclusive:
        reason += " (pencil screen inconclusive)"
    return Verdict(
        INDETERMINATE,
        {"reason": reason, "trials": opts.trials, "subspace_dim": s},
    )


def check_point(lm: LocalModel, opts: CheckOptions | None = None) -> RegularityReport:
    """Run every regularity condition applicable to the model's point class."""
    opts = opts or CheckOptions()
    M = lm.params.M
    if opts.mode == MODE_STRICT and M < 10:
        raise RegularityError(f"strict mode requires M >= 10 (got {M}); use toy mode")
    checks: dict[str, Verdict] = {name: Verdict(NOT_APPLICABLE) for name in CONDITION_NAMES}
    cls = classify_point(lm)
    budget = opts.make_budget()

    r0_name, r0_verdict = check_R0(lm, budget)
    checks[r0_name] = r0_verdict

    q1, q2 = lm.q_comp(1), lm.q_comp(2)
    w1, w2 = lm.w_comp(1), lm.w_comp(2)

    if cls is PointClass.NON_SINGULAR_OFF_RAM:
        checks["R1.1"] = Verdict(PASS, {"note": "no additional condition off the branch divisor"})
    elif cls is PointClass.QUADRATIC_OFF_RAM:
        thr = rank_threshold(RANK_THRESHOLD_R21, M, opts.mode)
        rank = sym_rank(quad_to_sym(q2))
        status = PASS if rank >= thr else FAIL
        checks["R2.1"] = Verdict(status, {"rank": rank, "threshold": thr})
    elif cls is PointClass.NON_SINGULAR_ON_RAM:
        forms = [linear_form_coeffs(q1), linear_form_coeffs(w1)]
        basis = kernel_basis(lm.field, forms, lm.params.local_vars)
        restricted = restrict_linear(q2, LinearSubspace(lm.field, lm.params.local_vars, basis))
        if restricted.is_zero():
            checks["R1.2"] = Verdict(
                FAIL, {"reason": "q2 vanishes on {q1 = w1 = 0}"}
            )
        else:
            checks["R1.2"] = Verdict(PASS)
    elif cls is PointClass.QUADRATIC_ON_RAM_G_SMOOTH:
        lam = find_proportionality(q1, w1)
        form = w2 - q2.scale(lam)
        thr = rank_threshold(RANK_THRESHOLD_R22, M, opts.mode)
        rank = restrict_rank(form, [q1])
        status = PASS if rank >= thr else FAIL
        checks["R2.2"] = Verdict(
            status, {"lambda": lm.field.to_str(lam), "rank": rank, "threshold": thr}
        )
    elif cls is PointClass.QUADRATIC_ON_RAM_G_SING:
        thr = rank_threshold(RANK_THRESHOLD_R23, M, opts.mode)
        rank = restrict_rank(q2, [w1])
        status = PASS if rank >= thr else FAIL
        checks["R2.3"] = Verdict(status, {"rank": rank, "threshold": thr})
    elif cls is PointClass.BI_QUADRATIC:
        checks["R2^2"] = check_R22(lm, opts)

    statuses = [v.status for v in checks.values()]
    if cls is PointClass.DEGENERATE and FAIL not in statuses:
        # outside the taxonomy: never regular, even if R0 happened to pass
        checks["R0.2"] = Verdict(FAIL, {"reason": "degenerate point outside the taxonomy"})
        statuses = [v.status for v in checks.values()]
    if FAIL in statuses:
        overall = FAIL
    elif INDETERMINATE in statuses:
        overall = INDETERMINATE
    else:
        overall = PASS
    return RegularityReport(
        point_class=cls, checks=checks, overall=overall, mode=opts.mode, seed=opts.seed
    )
