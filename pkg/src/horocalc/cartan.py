"""Quantitative audits of the Cartan-group Busemann estimates.

The cube-root laws are audited, not proven: reports fit the smallest
constants admissible over the feasible range and expose the per-step data.
All element bookkeeping runs in the scaled integer coordinates of
CartanElement, so exhaustive enumeration stays cheap.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import BudgetExceededError, DegenerateInputError
from .groups import Word, standard_group
from .horoboundary import DigitizedRay, busemann_eval, ray_elements
from .metric import DEFAULT_STATE_CAP, word_length

_STEPS = {"x": (1, 0), "y": (0, 1), "x~": (-1, 0), "y~": (0, -1)}


def _reduced(u: tuple[int, int]) -> tuple[int, int]:
    a, b = u
    if (a, b) == (0, 0):
        raise DegenerateInputError("direction must be nonzero")
    g = math.gcd(abs(a), abs(b))
    return (a // g, b // g)


@dataclass(frozen=True)
class DirectionFrame:
    """A reduced integer direction with its +90-degree rotation and parity class.

    Pairings against u_perp are taken raw (no normalization); only signs and
    ratios are ever compared, which are scale invariant.
    """

    u: tuple[int, int]
    u_perp: tuple[int, int]
    parity: str  # "both-odd" | "mixed-parity" | "axis"

    @staticmethod
    def from_direction(u: tuple[int, int]) -> "DirectionFrame":
        a, b = _reduced(u)
        if a == 0 or b == 0:
            parity = "axis"
        elif a % 2 == 1 and b % 2 == 1:
            parity = "both-odd"
        else:
            parity = "mixed-parity"
        return DirectionFrame((a, b), (-b, a), parity)


def perp_pairing6(elem, u_perp: tuple[int, int]) -> int:
    """<6*B(g); u_perp> as an exact integer."""
    return elem.bar6x * u_perp[0] + elem.bar6y * u_perp[1]


def central_with_barycenter(b: tuple[int, int]) -> tuple:
    """Element and word for [x^b1 y^b2, [x, y]]: endpoint 0, area 0, barycenter b.

    Conjugating the unit commutator loop by x^b1 y^b2 translates its area
    mass, so the commutator of the two cancels the area and leaves exactly
    the prescribed first moment.
    """
    b1, b2 = int(b[0]), int(b[1])
    g_word = tuple(["x"] * b1 if b1 >= 0 else ["x~"] * (-b1)) + tuple(
        ["y"] * b2 if b2 >= 0 else ["y~"] * (-b2)
    )
    h_word = ("x", "y", "x~", "y~")
    group = standard_group("cartan")
    g_inv = group.invert_word(g_word)
    h_inv = group.invert_word(h_word)
    word = g_word + h_word + g_inv + h_inv
    elem = group.evaluate(word)
    assert elem.endpoint == (0, 0) and elem.area2 == 0
    assert elem.barycenter == (Fraction(b1), Fraction(b2))
    return elem, word


def _step_state(state, step):
    """Append one unit generator to a scaled-coordinate Cartan state."""
    px, py, a2, b6x, b6y = state
    sx, sy = step
    det = px * sy - py * sx
    return (
        px + sx,
        py + sy,
        a2 + det,
        b6x + (2 * px + sx) * det,
        b6y + (2 * py + sy) * det,
    )


@dataclass
class LowerAuditReport:
    direction: tuple[int, int]
    n: int
    reference6: int  # <6*B(digitized prefix); u_perp>
    per_delta: list[dict]  # {"delta", "length", "words", "max6"}
    fitted_m: Fraction | None
    extremal_at_zero: bool
    mode: str


def bound_audit_lower(
    u: tuple[int, int],
    n: int,
    delta_max: int,
    mode: str = "exhaustive",
    samples: int = 20_000,
    seed: int = 0,
) -> LowerAuditReport:
    """Audit the barycenter pairing of all detour words against the digitized ray.

    For each extra length delta, enumerate (or sample) the words of length
    n + delta with the same endpoint as the digitized prefix, record the
    maximal <B; u_perp>, and fit the least constant M with
    max <= reference + M * delta^3 across the buckets.
    """
    frame = DirectionFrame.from_direction(u)
    if mode == "exhaustive" and n + delta_max > 12:
        raise BudgetExceededError(
            f"exhaustive audit limited to n + delta <= 12, got {n + delta_max}"
        )
    if mode not in ("exhaustive", "search"):
        raise DegenerateInputError("mode must be 'exhaustive' or 'search'")

    group = standard_group("cartan")
    gamma = ray_elements(group, DigitizedRay(frame.u), n)[-1]
    target = gamma.endpoint
    ref6 = perp_pairing6(gamma, frame.u_perp)
    steps = list(_STEPS.values())

    per_delta = []
    for delta in range(0, delta_max + 1):
        length = n + delta
        l1 = abs(target[0]) + abs(target[1])
        if (length - l1) % 2 == 1 or length < l1:
            continue
        if mode == "exhaustive":
            best, count = _exhaustive_max(target, length, frame.u_perp, steps)
        else:
            best, count = _sampled_max(target, length, frame.u_perp, samples, seed + delta)
        if best is None:
            continue
        per_delta.append({"delta": delta, "length": length, "words": count, "max6": best})

    fitted = None
    for rec in per_delta:
        if rec["delta"] == 0:
            continue
        need = Fraction(rec["max6"] - ref6, 6 * rec["delta"] ** 3)
        if fitted is None or need > fitted:
            fitted = need
    if fitted is not None:
        fitted = max(fitted, Fraction(0))
    zero = next((r for r in per_delta if r["delta"] == 0), None)
    extremal = zero is not None and zero["max6"] <= ref6
    return LowerAuditReport(
        direction=frame.u,
        n=n,
        reference6=ref6,
        per_delta=per_delta,
        fitted_m=fitted,
        extremal_at_zero=extremal,
        mode=mode,
    )


def _exhaustive_max(target, length, u_perp, steps):
    """DFS over all words of the given length ending at target; max pairing."""
    best = None
    count = 0
    tx, ty = target
    upx, upy = u_perp
    stack = [((0, 0, 0, 0, 0), length)]
    # iterative DFS; state space is tiny thanks to the l1 feasibility prune
    while stack:
        state, remaining = stack.pop()
        px, py = state[0], state[1]
        need = abs(tx - px) + abs(ty - py)
        if need > remaining:
            continue
        if remaining == 0:
            count += 1
            val = state[3] * upx + state[4] * upy
            if best is None or val > best:
                best = val
            continue
        for step in steps:
            stack.append((_step_state(state, step), remaining - 1))
    return best, count


def _sampled_max(target, length, u_perp, samples, seed):
    """Random words with the right endpoint: sample a step multiset, shuffle."""
    tx, ty = target
    rng = random.Random(seed)
    splits = []
    weights = []
    for r in range(length + 1):
        l = r - tx
        rest = length - r - l
        if l < 0 or rest < 0:
            continue
        if (rest - abs(ty)) % 2 != 0 or rest < abs(ty):
            continue
        up = (rest + ty) // 2
        dn = (rest - ty) // 2
        splits.append((r, l, up, dn))
        weights.append(
            math.comb(length, r) * math.comb(length - r, l) * math.comb(rest, up)
        )
    if not splits:
        return None, 0
    best = None
    for _ in range(samples):
        r, l, up, dn = rng.choices(splits, weights=weights)[0]
        word = ["R"] * r + ["L"] * l + ["U"] * up + ["D"] * dn
        rng.shuffle(word)
        state = (0, 0, 0, 0, 0)
        for w in word:
            state = _step_state(state, {"R": (1, 0), "L": (-1, 0), "U": (0, 1), "D": (0, -1)}[w])
        assert (state[0], state[1]) == (tx, ty)
        val = state[3] * u_perp[0] + state[4] * u_perp[1]
        if best is None or val > best:
            best = val
    return best, samples


@dataclass
class UpperAuditReport:
    direction: tuple[int, int]
    h_word: Word
    area: Fraction
    perp_pairing: Fraction  # <B(h); u_perp>
    rows: list[dict]  # {"n", "length", "diff"}
    fitted_c2: float | None
    fitted_c2_improved: float | None
    parity: str
    complete: bool


def bound_audit_upper(
    u: tuple[int, int],
    h_word: Sequence[str],
    n_values: Sequence[int],
    state_cap: int | None = DEFAULT_STATE_CAP,
) -> UpperAuditReport:
    """Measure |h . ray_n| - n and fit the cube-root upper-bound constant.

    The audited inequality is diff <= C2 * cbrt(max(<B(h); u_perp>, 0) +
    |A(h)|) + C2; for both-odd directions the improved form drops the |A(h)|
    term. Budget exhaustion yields a partial (prefix) report.
    """
    frame = DirectionFrame.from_direction(u)
    group = standard_group("cartan")
    h_word = tuple(h_word)
    h = group.evaluate(h_word)
    if h.abelianized() != (0, 0):
        raise DegenerateInputError("upper audit needs h with zero abelianization")
    pairing = Fraction(perp_pairing6(h, frame.u_perp), 6)
    area = h.area

    rows = []
    complete = True
    spec = DigitizedRay(frame.u)
    prefix_elems = ray_elements(group, spec, max(n_values) if n_values else 0)
    for n in sorted(n_values):
        g = h * prefix_elems[n]
        res = word_length(group, g, budget=n + len(h_word), state_cap=state_cap)
        if not res.exact:
            complete = False
            break
        rows.append({"n": n, "length": res.length, "diff": res.length - n})
        if res.length < n:
            raise AssertionError("length below the abelianized gauge (hard bug)")

    q_general = float(max(pairing, 0) + abs(area))
    q_improved = float(max(pairing, 0))
    fitted = _fit_c2(rows, q_general)
    fitted_improved = _fit_c2(rows, q_improved) if frame.parity == "both-odd" else None
    return UpperAuditReport(
        direction=frame.u,
        h_word=h_word,
        area=area,
        perp_pairing=pairing,
        rows=rows,
        fitted_c2=fitted,
        fitted_c2_improved=fitted_improved,
        parity=frame.parity,
        complete=complete,
    )


def _fit_c2(rows, q) -> float | None:
    if not rows:
        return None
    return max(r["diff"] / (q ** (1.0 / 3.0) + 1.0) for r in rows)


@dataclass
class DistinctnessReport:
    u: tuple[int, int]
    v: tuple[int, int]
    witness_b: tuple[int, int]
    h_word: Word
    powers: list[int]
    u_values: dict[int, list[int]]
    v_values: dict[int, list[int]]
    u_min_value: int
    v_final_value: int
    v_certified: bool


def pick_witness_barycenter(u: tuple[int, int], v: tuple[int, int]) -> tuple[int, int]:
    """Smallest (l-infinity, then lexicographic) b with <-b; u_perp> > 0 and
    <-b; v_perp> <= 0."""
    fu = DirectionFrame.from_direction(u)
    fv = DirectionFrame.from_direction(v)
    if fu.u == fv.u:
        raise DegenerateInputError("directions coincide; no separating barycenter exists")
    for k in range(1, 64):
        shell = sorted(
            (bx, by)
            for bx in range(-k, k + 1)
            for by in range(-k, k + 1)
            if max(abs(bx), abs(by)) == k
        )
        for b in shell:
            su = -(b[0] * fu.u_perp[0] + b[1] * fu.u_perp[1])
            sv = -(b[0] * fv.u_perp[0] + b[1] * fv.u_perp[1])
            if su > 0 and sv <= 0:
                return b
    raise AssertionError("no witness barycenter found in a huge window (hard bug)")


def distinctness_witness(
    u: tuple[int, int],
    v: tuple[int, int],
    powers: Sequence[int] = (1,),
    horizon: int = 16,
    state_cap: int | None = DEFAULT_STATE_CAP,
) -> DistinctnessReport:
    """Divergence evidence for the Busemann points of two directions.

    Evaluates both rays against powers of the separating central element;
    the u-side values stay strictly positive while the v-side values drop
    (often certifying 0 exactly). All numbers are monotone horizon values.
    """
    group = standard_group("cartan")
    b = pick_witness_barycenter(u, v)
    _, h_word = central_with_barycenter(b)
    u_vals: dict[int, list[int]] = {}
    v_vals: dict[int, list[int]] = {}
    u_min = None
    v_final = None
    v_cert = False
    for p in powers:
        word = h_word * p
        eu = busemann_eval(group, DigitizedRay(u), list(word), horizon, state_cap=state_cap)
        ev = busemann_eval(group, DigitizedRay(v), list(word), horizon, state_cap=state_cap)
        u_vals[p] = eu.values
        v_vals[p] = ev.values
        u_min = eu.value if u_min is None else min(u_min, eu.value)
        v_final = ev.value
        v_cert = ev.certified
    return DistinctnessReport(
        u=_reduced(u),
        v=_reduced(v),
        witness_b=b,
        h_word=h_word,
        powers=list(powers),
        u_values=u_vals,
        v_values=v_vals,
        u_min_value=u_min,
        v_final_value=v_final,
        v_certified=v_cert,
    )


@dataclass
class StabilizerEscapeReport:
    u: tuple[int, int]
    g_word: Word
    m: int
    powers: list[int]
    base_values: dict[int, int]  # b(h^k)
    translated_values: dict[int, int]  # (g^m . b)(h^k)
    gaps: dict[int, int]
    complete: bool


def stabilizer_escape(
    u: tuple[int, int],
    g_word: Sequence[str],
    powers: Sequence[int] = (1,),
    horizon: int = 12,
    state_cap: int | None = DEFAULT_STATE_CAP,
    m_override: int | None = None,
) -> StabilizerEscapeReport:
    """Evidence that g does not fix the reduced class of the direction's ray.

    Uses the square pair h = [x,y][x~,y~] (area 2, barycenter 0) and compares
    b(h^k) with (g^m . b)(h^k) = b(g^{-m} h^k) - b(g^{-m}) for the smallest
    power m that points the translated barycenter against u_perp.
    """
    frame = DirectionFrame.from_direction(u)
    group = standard_group("cartan")
    g_word = tuple(g_word)
    g = group.evaluate(g_word)
    pairing = g.x * frame.u_perp[0] + g.y * frame.u_perp[1]
    if pairing == 0:
        raise DegenerateInputError(
            "the element's abelianization is parallel to the direction; "
            "the escape argument needs <g; u_perp> != 0"
        )
    m = m_override if m_override is not None else (1 if pairing > 0 else -1)
    if m * pairing <= 0:
        raise DegenerateInputError("m must point the translated barycenter against u_perp")
    h_word = ("x", "y", "x~", "y~", "x~", "y~", "x", "y")
    gm_word = g_word * m if m > 0 else group.invert_word(g_word) * (-m)
    gm_inv_word = group.invert_word(gm_word)
    spec = DigitizedRay(frame.u)

    base: dict[int, int] = {}
    translated: dict[int, int] = {}
    gaps: dict[int, int] = {}
    complete = True
    base_shift = busemann_eval(group, spec, list(gm_inv_word), horizon, state_cap=state_cap)
    for k in powers:
        if k == 0:
            base[k] = 0
            translated[k] = 0
            gaps[k] = 0
            continue
        word_hk = h_word * k
        b_hk = busemann_eval(group, spec, list(word_hk), horizon, state_cap=state_cap)
        b_ghk = busemann_eval(
            group, spec, list(gm_inv_word + word_hk), horizon, state_cap=state_cap
        )
        if b_hk.exhausted or b_ghk.exhausted:
            complete = False
        base[k] = b_hk.value
        translated[k] = b_ghk.value - base_shift.value
        gaps[k] = translated[k] - base[k]
    return StabilizerEscapeReport(
        u=frame.u,
        g_word=g_word,
        m=m,
        powers=list(powers),
        base_values=base,
        translated_values=translated,
        gaps=gaps,
        complete=complete,
    )
