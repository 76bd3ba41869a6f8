"""Hand-built local models with known verdicts, one passing and one failing
instance per condition, plus the three structural bi-quadratic failure modes.

All live at M = 10 (strict mode).  Components are written in the 11 chart
coordinates x0..x10; the expected entries pin both the verdict and the
machine-readable witness content.
"""

from rigidcheck.fields import QQ

from conftest import make_model

M = 10

SUM7 = " + ".join(f"x{i}^2" for i in range(7))  # rank 7
SUM6 = " + ".join(f"x{i}^2" for i in range(6))  # rank 6
DIAG11 = " + ".join(f"x{i}^2" for i in range(11))  # rank 11
DIAG11_DISTINCT = " + ".join(f"{i + 2}*x{i}^2" for i in range(11))


def _r22_low_rank_w2():
    # w2 - 2*q2 = -(x4^2 + ... + x10^2): z-rank 7, so the pencil member at
    # lambda = 2 has rank 8 = s - 3 in the (z, y)-space: a universal obstruction
    return " + ".join((f"2*x{i}^2" if i < 4 else f"x{i}^2") for i in range(11))


CURATED = [
    {
        "name": "R0.1-pass",
        "model": dict(M=M, m=2, q={1: "x0", 2: "x1^2"}, w0=1),
        "class": "NonSingularOffRam",
        "check": "R0.1",
        "verdict": "pass",
        "overall": "pass",
    },
    {
        "name": "R0.1-fail",
        "model": dict(M=M, m=2, q={1: "x0", 2: "x0*x1"}, w0=1),
        "class": "NonSingularOffRam",
        "check": "R0.1",
        "verdict": "fail",
        "overall": "fail",
        "witness": {"failing_degree": 2},
    },
    {
        "name": "R0.2-pass",
        "model": dict(M=M, m=3, q={2: SUM7, 3: "x7^3"}, w0=1),
        "class": "QuadraticOffRam",
        "check": "R0.2",
        "verdict": "pass",
        "overall": "pass",
    },
    {
        "name": "R0.2-fail",
        # q3 = x0 * q2 lies in (q2): the prefix [q2, q3] drops no dimension
        "model": dict(
            M=M, m=3, q={2: SUM7, 3: " + ".join(f"x0*x{i}^2" for i in range(7))}, w0=1
        ),
        "class": "QuadraticOffRam",
        "check": "R0.2",
        "verdict": "fail",
        "overall": "fail",
        "witness": {"failing_degree": 3},
    },
    {
        "name": "R1.2-pass",
        "model": dict(
            M=M, m=2, q={1: "x0", 2: "x2^2 + x0*x4"}, w={1: "x1"}, w0=0
        ),
        "class": "NonSingularOnRam",
        "check": "R1.2",
        "verdict": "pass",
        "overall": "pass",
    },
    {
        "name": "R1.2-fail",
        "model": dict(
            M=M, m=2, q={1: "x0", 2: "x0*x2 + x1*x3"}, w={1: "x1"}, w0=0
        ),
        "class": "NonSingularOnRam",
        "check": "R1.2",
        "verdict": "fail",
        "overall": "fail",
    },
    {
        "name": "R2.1-pass-boundary",
        "model": dict(M=M, m=2, q={2: SUM7}, w0=1),
        "class": "QuadraticOffRam",
        "check": "R2.1",
        "verdict": "pass",
        "overall": "pass",
        "witness": {"rank": 7, "threshold": 7},
    },
    {
        "name": "R2.1-fail-rank6",
        "model": dict(M=M, m=2, q={2: SUM6}, w0=1),
        "class": "QuadraticOffRam",
        "check": "R2.1",
        "verdict": "fail",
        "overall": "fail",
        "witness": {"rank": 6, "threshold": 7},
    },
    {
        "name": "R2.2-pass-boundary",
        "model": dict(
            M=M,
            m=2,
            q={1: "x0", 2: "x1*x2"},
            w={
                1: "2*x0",
                2: "2*x1*x2 + " + " + ".join(f"x{i}^2" for i in range(1, 7)),
            },
            w0=0,
        ),
        "class": "QuadraticOnRamGSmooth",
        "check": "R2.2",
        "verdict": "pass",
        "overall": "pass",
        "witness": {"lambda": "2", "rank": 6, "threshold": 6},
    },
    {
        "name": "R2.2-fail-rank5",
        "model": dict(
            M=M,
            m=2,
            q={1: "x0", 2: "x1*x2"},
            w={
                1: "2*x0",
                2: "2*x1*x2 + " + " + ".join(f"x{i}^2" for i in range(1, 6)),
            },
            w0=0,
        ),
        "class": "QuadraticOnRamGSmooth",
        "check": "R2.2",
        "verdict": "fail",
        "overall": "fail",
        "witness": {"lambda": "2", "rank": 5, "threshold": 6},
    },
    {
        "name": "R2.3-pass-boundary",
        "model": dict(
            M=M,
            m=2,
            q={2: " + ".join(f"x{i}^2" for i in range(1, 8))},
            w={1: "x0"},
            w0=0,
        ),
        "class": "QuadraticOnRamGSing",
        "check": "R2.3",
        "verdict": "pass",
        "overall": "pass",
        "witness": {"rank": 7, "threshold": 7},
    },
    {
        "name": "R2.3-fail-rank6",
        "model": dict(
            M=M,
            m=2,
            q={2: " + ".join(f"x{i}^2" for i in range(1, 7)) + " + x0*x8"},
            w={1: "x0"},
            w0=0,
        ),
        "class": "QuadraticOnRamGSing",
        "check": "R2.3",
        "verdict": "fail",
        "overall": "fail",
        "witness": {"rank": 6, "threshold": 7},
    },
    {
        "name": "R2^2-pass",
        "model": dict(M=M, m=2, q={2: DIAG11}, w={2: DIAG11_DISTINCT}, w0=0),
        "class": "BiQuadratic",
        "check": "R2^2",
        "verdict": "pass",
        "overall": "pass",
    },
    {
        "name": "R2^2-fail-reducible",
        "model": dict(M=M, m=2, q={2: "x0*x1"}, w={2: DIAG11_DISTINCT}, w0=0),
        "class": "BiQuadratic",
        "check": "R2^2",
        "verdict": "fail",
        "overall": "fail",
        "witness": {"mode": "reducible-quadric", "rank": 2},
    },
    {
        "name": "R2^2-fail-square-pencil",
        "model": dict(
            M=M, m=2, q={2: DIAG11}, w={2: DIAG11 + " + x0^2"}, w0=0
        ),
        "class": "BiQuadratic",
        "check": "R2^2",
        "verdict": "fail",
        "overall": "fail",
        "witness": {"mode": "square-pencil", "lambda": "1"},
    },
    {
        "name": "R2^2-fail-low-pencil-rank",
        "model": dict(M=M, m=2, q={2: DIAG11}, w={2: _r22_low_rank_w2()}, w0=0),
        "class": "BiQuadratic",
        "check": "R2^2",
        "verdict": "fail",
        "overall": "fail",
        "witness": {"mode": "rank-pencil", "lambda": "2"},
    },
]


def build(entry):
    spec = dict(entry["model"])
    M_ = spec.pop("M")
    m_ = spec.pop("m")
    return make_model(M_, m_, field=QQ, **spec)
