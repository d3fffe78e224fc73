"""
Membership Service for the amplituhedron toolkit
The m=2 membership oracle, its sign-flip cross-check and the labelled Inside/Outside constructions
"""

import logging
import random
from fractions import Fraction
from typing import Tuple

from config import Config
from errors import ContractError, DegeneratePointError
from models import (Matrix, MembershipVerdict, SignFlipMembership, TwistorContext, Verdict,
                    YPoint)
from services.exact_core import rank
from services.positivity import (random_nodes, row_mix, sample_context, sample_unconstrained_y,
                                 sample_vandermonde_z)
from services.twistor import coarse_boundary_report, coarse_windows, sign_flip_count, twistor, twistor_sequence
from services.winding import winding_number

logger = logging.getLogger(__name__)


def _require_m2(ctx: TwistorContext):
    if ctx.m != 2:
        raise ContractError(f"membership is decided for m = 2 only, got m = {ctx.m}")


def maximal_winding(k: int) -> int:
    return (k + 1) // 2


def first_row_flips(ctx: TwistorContext) -> int:
    """Sign flips of (<Y, 1, i>)_i"""
    return sign_flip_count(twistor_sequence(ctx, (1,)))


def membership_m2(ctx: TwistorContext, ray_seed: int = 0, retries: int = None) -> MembershipVerdict:
    """
    Decide whether Y lies in the m = 2 amplituhedron.

    Args:
        ctx: the (Y, Z) pair with m = 2
        ray_seed: seed of the winding ray
        retries: ray resampling bound handed to winding_number

    Returns:
        CoarseBoundaryHit when a coarse twistor vanishes, otherwise Inside iff
        the coarse conditions hold up to the global sign and the winding is
        maximal
    """
    _require_m2(ctx)
    report = coarse_boundary_report(ctx)
    flips = first_row_flips(ctx)
    if not report.without_coarse_boundary:
        logger.debug("coarse windows %s vanish", report.zero_windows)
        return MembershipVerdict(verdict=Verdict.COARSE_BOUNDARY_HIT, winding_magnitude=0,
                                 coarse_ok=False, flips_of_first_row=flips)

    coarse_ok = report.orientation != 0
    magnitude = winding_number(ctx, ray_seed, retries).magnitude
    inside = coarse_ok and magnitude == maximal_winding(ctx.k)
    return MembershipVerdict(
        verdict=Verdict.INSIDE if inside else Verdict.OUTSIDE,
        winding_magnitude=magnitude,
        coarse_ok=coarse_ok,
        flips_of_first_row=flips
    )


def signflip_membership_m2(ctx: TwistorContext) -> SignFlipMembership:
    """Flips s of (<Y,1,i>)_i and whether s reaches k"""
    _require_m2(ctx)
    flips = first_row_flips(ctx)
    report = coarse_boundary_report(ctx, strict=True)
    return SignFlipMembership(flips=flips, maximal=(flips == ctx.k), coarse_ok=report.orientation != 0)


def maximality_bound_check(ctx: TwistorContext, ray_seed: int = 0, retries: int = None) -> bool:
    """The winding of any Y off the coarse boundary is at most floor((k+1)/2)"""
    _require_m2(ctx)
    return winding_number(ctx, ray_seed, retries).magnitude <= maximal_winding(ctx.k)


def construct_inside(k: int, n: int, seed: int, c_kind: str = 'vandermonde') -> TwistorContext:
    """
    Y = C Z with C strictly positive, seen through a random row mixing.

    The mixing changes the representative, possibly its sign, never the point.
    """
    ctx = sample_context(n, k, 2, seed, c_kind=c_kind)
    mixed = row_mix(ctx.y, seed)
    return TwistorContext(z=ctx.z, y=mixed, c=None)


def _shift_first_row(y: YPoint, t: Fraction, u) -> YPoint:
    rows = [list(row) for row in y.matrix.entries]
    rows[0] = [a + t * b for a, b in zip(rows[0], u)]
    return YPoint(k=y.k, m=y.m, matrix=Matrix.of(rows, cols=y.k + y.m))


def _replace_first_row(y: YPoint, u) -> YPoint:
    rows = [list(row) for row in y.matrix.entries]
    rows[0] = list(u)
    return YPoint(k=y.k, m=y.m, matrix=Matrix.of(rows, cols=y.k + y.m))


def construct_outside(k: int, n: int, seed: int, retries: int = None) -> TwistorContext:
    """
    Push an inside point across one coarse wall.

    The first row of an inside representative moves along u = sum_i c_i Z_i by
    t = -2a/b, where a is the chosen coarse twistor and b its derivative along
    u; the chosen twistor changes sign. Draws repeat until Y keeps rank k,
    no coarse twistor vanishes and the coarse conditions fail up to sign.
    """
    retries = retries or Config.RAY_RETRIES
    base = sample_context(n, k, 2, seed)
    rng = random.Random(seed)
    windows = coarse_windows(n, k, 2)
    for attempt in range(1, retries + 1):
        coefficients = [rng.randint(-3, 3) for _ in range(n)]
        if not any(coefficients):
            continue
        u = [sum((c * base.z.row(i + 1)[j] for i, c in enumerate(coefficients)), Fraction(0))
             for j in range(k + 2)]
        window, _prefactor = windows[rng.randrange(len(windows))]
        a = twistor(base, window)
        b = twistor(base.with_y(_replace_first_row(base.y, u)), window)
        if b == 0:
            continue
        y = _shift_first_row(base.y, -2 * a / b, u)
        if rank(y.matrix) != k:
            continue
        ctx = TwistorContext(z=base.z, y=y)
        report = coarse_boundary_report(ctx)
        if report.without_coarse_boundary and report.orientation == 0:
            logger.debug("outside sample k=%d n=%d seed=%d after %d draws (window %s)",
                         k, n, seed, attempt, window)
            return ctx
    raise DegeneratePointError(f"no outside sample for k={k} n={n} seed={seed} after {retries} draws")


def unconstrained_wcb_context(n: int, k: int, m: int, seed: int, retries: int = None) -> TwistorContext:
    """A random full-rank Y, off the coarse boundary, against a seeded positive Z"""
    retries = retries or Config.RAY_RETRIES
    z = sample_vandermonde_z(n, k, m, random_nodes(n, seed))
    for attempt in range(retries):
        ctx = TwistorContext(z=z, y=sample_unconstrained_y(k, m, seed * retries + attempt))
        if coarse_boundary_report(ctx).without_coarse_boundary:
            return ctx
    raise DegeneratePointError(f"every unconstrained draw hit the coarse boundary (k={k} n={n} seed={seed})")


def labelled_pair(k: int, n: int, seed: int) -> Tuple[TwistorContext, TwistorContext]:
    """One constructed Inside and one constructed Outside context"""
    return construct_inside(k, n, seed), construct_outside(k, n, seed)
