"""Phase read-off: invert build_unitary by degree-lowering peeling.

Peeling removes the last oracle iterate: if the leading slices of P and Q
in some direction agree up to a unimodular phase e^{i phi_X}, then
right-multiplying by Z(-phi) W^{-1} with phi = phi_X/2 cancels the leading
terms and lowers the degree in that direction by one. The proportionality
itself is the load-bearing property (it is what makes read-off possible at
all), so this module also exposes a direct checker and a randomized scan
for it; a counterexample from the scan would be a genuine finding, not a
bug.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass

import numpy as np

from mqsp.errors import ReadoffError, VerificationError
from mqsp.laurent import LaurentPoly2
from mqsp.protocol import (
    X_A,
    X_B,
    Y_A,
    Y_B,
    ProtocolSpec,
    Su2LaurentUnitary,
    build_unitary,
    principal_phase,
    random_spec,
)

DEFAULT_TOLERANCE = 1e-8


def readoff_tolerance():
    """Read-off tolerance; the MQSP_TOLERANCE env var overrides the default."""
    raw = os.environ.get("MQSP_TOLERANCE")
    return float(raw) if raw else DEFAULT_TOLERANCE


def _joint_positive_degree(u, var):
    """Max positive exponent of `var` over P and Q jointly; None if neither
    polynomial carries the variable with positive exponent."""
    best = None
    for poly in (u.P, u.Q):
        d = poly.degrees()
        pos = d.pos_a if var == "a" else d.pos_b
        if pos is not None and (best is None or pos > best):
            best = pos
    return best


@dataclass(frozen=True)
class _SliceCheck:
    ok: bool
    phase: float | None
    mismatch: float
    reason: str | None


def _slice_proportionality(u, var, level, tol):
    """Test P_level(other) == e^{i phase} Q_level(other) at the given
    exponent of `var`. Phase is read from the largest-magnitude coefficient
    of Q's slice; the mismatch norm is relative to P's slice."""
    ps = u.P.slice_at(var, level)
    qs = u.Q.slice_at(var, level)
    if ps.is_zero() or qs.is_zero():
        # one side vanishing while the other does not cannot be fixed by a
        # unimodular scalar (both vanishing cannot happen at the joint max)
        return _SliceCheck(False, None, math.inf, "zero leading slice")
    k_star = max(qs.items(), key=lambda item: abs(item[1]))[0]
    ratio = ps.coeff(k_star) / qs.coeff(k_star)
    phase = math.atan2(ratio.imag, ratio.real)
    w = complex(math.cos(phase), math.sin(phase))
    mismatch = (ps - w * qs).max_abs() / ps.max_abs()
    if mismatch > tol:
        return _SliceCheck(False, phase, mismatch, None)
    return _SliceCheck(True, phase, mismatch, None)


@dataclass(frozen=True)
class SliceReport:
    """Leading-slice proportionality per direction.

    holds_a/holds_b: slices proportional by a unimodular scalar within
    tolerance. phase_a/phase_b: the recovered phase (None when a slice
    vanished). mismatch_a/mismatch_b: relative sup-norm mismatch (inf when
    a slice vanished). reason_a/reason_b: "zero leading slice" when that is
    why the direction failed. The scanned property is that at least one
    direction holds for every protocol unitary.
    """

    holds_a: bool
    holds_b: bool
    phase_a: float | None
    phase_b: float | None
    mismatch_a: float
    mismatch_b: float
    reason_a: str | None
    reason_b: str | None

    @property
    def holds(self):
        return self.holds_a or self.holds_b


def check_leading_slices(u, tol=None):
    """Proportionality report for both directions.

    Q identically zero is the degenerate base case: both directions hold
    with phase 0 by convention (there is nothing to constrain).
    """
    if tol is None:
        tol = readoff_tolerance()
    if u.Q.is_zero():
        return SliceReport(True, True, 0.0, 0.0, 0.0, 0.0, None, None)
    checks = {}
    for var in ("a", "b"):
        level = _joint_positive_degree(u, var)
        if level is None:
            level = 0  # no positive power present: the slice at 0 is all of it
        checks[var] = _slice_proportionality(u, var, level, tol)
    ca, cb = checks["a"], checks["b"]
    return SliceReport(
        holds_a=ca.ok,
        holds_b=cb.ok,
        phase_a=ca.phase,
        phase_b=cb.phase,
        mismatch_a=ca.mismatch,
        mismatch_b=cb.mismatch,
        reason_a=ca.reason,
        reason_b=cb.reason,
    )


def _truncate_direction(poly, var, bound):
    """Drop exponents of `var` outside [-bound, bound]; the discarded mass
    is read-off noise and is accounted for by the final rebuild check."""
    if bound < 0:
        return LaurentPoly2.zero()
    out = {}
    for (j, k), c in poly.items():
        e = j if var == "a" else k
        if -bound <= e <= bound:
            out[(j, k)] = c
    return LaurentPoly2(out)


def peel_once(u, direction, tol=None):
    """Remove the final oracle iterate in `direction` and its Z-phase.

    Returns (phase, reduced). The phase is fixed deterministically to
    phi_X/2 in (-pi/2, pi/2]; the other branch phi_X/2 + pi differs by a
    sign that later phases absorb, so rebuilds agree either way.
    """
    if tol is None:
        tol = readoff_tolerance()
    if direction not in ("a", "b"):
        raise ValueError("direction must be 'a' or 'b'")
    level = _joint_positive_degree(u, direction)
    if level is None or level < 1:
        raise ReadoffError("cannot peel: no positive degree in direction %r" % direction)
    check = _slice_proportionality(u, direction, level, tol)
    if not check.ok:
        raise ReadoffError("cannot peel: leading slices not proportional")
    phi = principal_phase(check.phase) / 2.0
    w = complex(math.cos(phi), math.sin(phi))
    x, y = (X_A, Y_A) if direction == "a" else (X_B, Y_B)
    # exact inverse of (apply_oracle then apply_phase); x^2 - y^2 = 1
    p_red = x * (w.conjugate() * u.P) - y * (w * u.Q)
    q_red = -y * (w.conjugate() * u.P) + x * (w * u.Q)
    p_red = _truncate_direction(p_red, direction, level - 1)
    q_red = _truncate_direction(q_red, direction, level - 1)
    return phi, Su2LaurentUnitary(p_red, q_red)


@dataclass(frozen=True)
class PeelStep:
    step: int
    direction: str
    phase: float
    both_directions_possible: bool


@dataclass(frozen=True)
class ReadoffResult:
    """Recovered protocol; residual is the max coefficient distance between
    build_unitary(spec) and the input. Phase lists are not unique when a
    step had both directions possible; equality is guaranteed only for the
    rebuilt unitary."""

    spec: ProtocolSpec
    residual: float
    branch_log: tuple


def readoff(P, Q, tol=None):
    """Recover (s, phases) from the two stored entries of a protocol unitary.

    Peels one iterate per step, preferring direction a when both are
    possible (the iterates commute in that case, so either choice rebuilds
    the same unitary). Raises "not an M-QSP unitary" when no direction
    peels before the constant level, and "rebuild mismatch" when the
    reconstruction misses the input by more than the tolerance.
    """
    if tol is None:
        tol = readoff_tolerance()
    original = Su2LaurentUnitary(P, Q)
    u = original
    bits_reversed = []
    phases_reversed = []
    log = []
    deg_p, deg_q = P.degrees(), Q.degrees()
    max_steps = sum(
        d or 0
        for deg in (deg_p, deg_q)
        for d in ((deg.deg_a, deg.deg_b) if not deg.is_zero else ())
    )
    for step in range(1, max_steps + 2):
        avail = {}
        for var in ("a", "b"):
            level = _joint_positive_degree(u, var)
            if level is None or level < 1:
                continue
            check = _slice_proportionality(u, var, level, tol)
            if check.ok:
                avail[var] = check
        if not avail:
            break
        direction = "a" if "a" in avail else "b"
        phi, u = peel_once(u, direction, tol=tol)
        bits_reversed.append(1 if direction == "a" else 0)
        phases_reversed.append(phi)
        log.append(
            PeelStep(
                step=step,
                direction=direction,
                phase=phi,
                both_directions_possible=len(avail) == 2,
            )
        )

    # base case: Q gone and P a unimodular constant, giving phi_0
    c = u.P.coeff(0, 0)
    nonconstant = (u.P - LaurentPoly2.constant(c)).max_abs()
    if u.Q.max_abs() > tol or nonconstant > tol or abs(abs(c) - 1.0) > tol:
        raise ReadoffError("not an M-QSP unitary")
    phi0 = math.atan2(c.imag, c.real)

    spec = ProtocolSpec(
        tuple(reversed(bits_reversed)),
        (phi0,) + tuple(reversed(phases_reversed)),
    )
    residual = build_unitary(spec).distance(original)
    if residual > tol:
        raise VerificationError("rebuild mismatch")
    return ReadoffResult(spec=spec, residual=residual, branch_log=tuple(log))


# -- numerical scan of the proportionality property ------------------------------


@dataclass(frozen=True)
class ScanSummary:
    """Randomized scan outcome. counterexamples holds (spec, report) pairs
    for which neither direction was proportional; expected empty."""

    trials: int
    passes: int
    worst_mismatch: float
    counterexamples: tuple
    n_max: int
    seed: int

    @property
    def all_passed(self):
        return self.passes == self.trials


def scan_leading_slices(n_max, trials, seed, tol=None):
    """Sample protocols with n uniform in {0..n_max}, bits and phases
    uniform; check the leading-slice proportionality on each."""
    if tol is None:
        tol = readoff_tolerance()
    rng = np.random.default_rng(seed)
    passes = 0
    worst = 0.0
    bad = []
    for _ in range(int(trials)):
        n = int(rng.integers(0, n_max + 1))
        spec = random_spec(rng, n)
        report = check_leading_slices(build_unitary(spec), tol=tol)
        if report.holds:
            passes += 1
            worst = max(worst, min(report.mismatch_a, report.mismatch_b))
        else:
            bad.append((spec, report))
    return ScanSummary(
        trials=int(trials),
        passes=passes,
        worst_mismatch=worst,
        counterexamples=tuple(bad),
        n_max=int(n_max),
        seed=int(seed),
    )
