"""
Winding Service for the amplituhedron toolkit
Exact ray casting for even m: signed counts of ray hits on the window simplices
"""

import logging
import random
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from config import Config
from errors import ContractError, DegeneratePointError, NonGenericRay, WindingUndefined
from models import FlipRelation, RayDirection, RayMode, TwistorContext, WindingHit, WindingResult
from services.exact_core import binomial, pair_windows, sign, window_lists_even
from services.twistor import (coarse_boundary_report, sign_flip_count, twistor, twistor_sequence,
                              twistor_with_replacement)

logger = logging.getLogger(__name__)


def _require_even(m: int):
    if m < 2 or m % 2:
        raise ContractError(f"winding needs an even m >= 2, got {m}")


def require_wcb(ctx: TwistorContext):
    """Raise WindingUndefined when some coarse boundary twistor vanishes"""
    report = coarse_boundary_report(ctx)
    if not report.without_coarse_boundary:
        raise WindingUndefined(
            f"Y lies on the coarse boundary: windows {report.zero_windows} vanish",
            windows=report.zero_windows
        )


def random_ray(n: int, rng: random.Random, bound: int = None) -> RayDirection:
    bound = bound or Config.RAY_COEFFICIENT_BOUND
    while True:
        coefficients = tuple(Fraction(rng.randint(-bound, bound)) for _ in range(n))
        if any(coefficients):
            return RayDirection(mode=RayMode.RANDOM_GENERIC, coefficients=coefficients)


def ray_lift(ctx: TwistorContext, ray: RayDirection) -> Tuple[Fraction, ...]:
    """sum_i c_i Z_i as a vector of R^{k+m}"""
    width = ctx.k + ctx.m
    lift = [Fraction(0)] * width
    for i, c in enumerate(ray.coefficients, start=1):
        if c:
            row = ctx.z.row(i)
            for j in range(width):
                lift[j] += c * row[j]
    return tuple(lift)


def _hit_orientation(base: Fraction, replacement_signs: Sequence[int]) -> int:
    target = sign(base)
    if all(s == target for s in replacement_signs):
        return target
    return 0


def elementary_winding(ctx: TwistorContext, window: Sequence[int], ray: RayDirection,
                       lift: Optional[Sequence[Fraction]] = None) -> int:
    """
    sign<Y, I> when the ray meets the open simplex S(I), else 0.

    The ray meets S(I) iff every replacement twistor <Y, I with entry j
    replaced by the lift> has the sign of <Y, I>, i.e. all Cramer
    coefficients of the lift on the vertices of I are positive.
    """
    window = tuple(window)
    base = twistor(ctx, window)
    if base == 0:
        raise ContractError(f"<Y,{window}> vanishes; the simplex is not full dimensional")
    if lift is None:
        lift = ray_lift(ctx, ray)
    signs = []
    for j in range(len(window)):
        value = twistor_with_replacement(ctx, window, j, lift)
        if value == 0:
            raise NonGenericRay(f"replacement twistor {j} of window {window} vanishes", window=window)
        signs.append(sign(value))
    return _hit_orientation(base, signs)


def _collect(ctx: TwistorContext, evaluate) -> Tuple[int, List[WindingHit]]:
    hits = []
    for window in window_lists_even(ctx.n, ctx.m):
        orientation = evaluate(window)
        if orientation:
            hits.append(WindingHit(window=window, orientation=orientation))
    return sum(h.orientation for h in hits), hits


def winding_number(ctx: TwistorContext, ray_seed: int = 0, retries: int = None) -> WindingResult:
    """
    Winding number of the origin of V_Y by a seeded generic ray.

    Args:
        ctx: the (Y, Z) pair, m even, Y off the coarse boundary
        ray_seed: seed of the ray generator; resampled on non-generic rays
        retries: bound on resampling, Config.RAY_RETRIES by default

    Returns:
        WindingResult with magnitude |signed_sum|
    """
    _require_even(ctx.m)
    require_wcb(ctx)
    retries = retries or Config.RAY_RETRIES
    rng = random.Random(ray_seed)
    for attempt in range(1, retries + 1):
        ray = random_ray(ctx.n, rng)
        lift = ray_lift(ctx, ray)
        try:
            signed_sum, hits = _collect(ctx, lambda w: elementary_winding(ctx, w, ray, lift))
        except NonGenericRay as e:
            logger.debug("ray %d (seed %d) not generic: %s", attempt, ray_seed, e)
            continue
        ray = RayDirection(mode=ray.mode, coefficients=ray.coefficients, seed=ray_seed, attempts=attempt)
        return WindingResult(signed_sum=signed_sum, magnitude=abs(signed_sum), hits=tuple(hits), ray_used=ray)
    raise NonGenericRay(f"no generic ray after {retries} attempts (seed {ray_seed})")


def mu_ray(ctx: TwistorContext) -> RayDirection:
    terms = tuple((ctx.n - t, t) for t in range(ctx.m))
    return RayDirection(mode=RayMode.MU_INFINITESIMAL, mu_terms=terms)


def _infinitesimal_sign(ctx: TwistorContext, window: Tuple[int, ...], position: int) -> int:
    """Sign as mu -> 0+ of sum_t mu^t <Y, I with entry `position` replaced by n-t>"""
    for index, _power in mu_ray(ctx).mu_terms:
        replaced = window[:position] + (index,) + window[position + 1:]
        s = sign(twistor(ctx, replaced))
        if s:
            return s
    raise DegeneratePointError(f"every mu-coefficient of replacement {position} in {window} vanishes")


def mu_ray_winding(ctx: TwistorContext) -> WindingResult:
    """Winding number along Z_n + mu Z_{n-1} + ... + mu^{m-1} Z_{n-m+1}, mu infinitesimal"""
    _require_even(ctx.m)
    require_wcb(ctx)

    def evaluate(window):
        base = twistor(ctx, window)
        signs = [_infinitesimal_sign(ctx, window, j) for j in range(len(window))]
        return _hit_orientation(base, signs)

    signed_sum, hits = _collect(ctx, evaluate)
    return WindingResult(signed_sum=signed_sum, magnitude=abs(signed_sum), hits=tuple(hits), ray_used=mu_ray(ctx))


def winding_formula(k: int, m: int) -> int:
    """C(floor((k+m-1)/2), m/2)"""
    _require_even(m)
    if k < 1:
        raise ContractError(f"winding_formula needs k >= 1, got {k}")
    return binomial((k + m - 1) // 2, m // 2)


def winding_flip_relation_m2(ctx: TwistorContext, ray_seed: int = 0, retries: int = None) -> FlipRelation:
    """
    Compare 2w with the flips s of (<Y,1,i>)_i.

    On the amplituhedron 2w = s+1 (k odd) or s (k even); in general 2w <= s+1.
    """
    if ctx.m != 2:
        raise ContractError(f"the flip relation is stated for m = 2, got m = {ctx.m}")
    w = winding_number(ctx, ray_seed, retries).magnitude
    s = sign_flip_count(twistor_sequence(ctx, (1,)))
    expected = s + 1 if ctx.k % 2 else s
    return FlipRelation(w_doubled=2 * w, s=s, consistent=(2 * w == expected), bounded=(2 * w <= s + 1))


def predicted_hits_n_equals_k_plus_m(k: int, m: int) -> List[WindingHit]:
    """Windows hit by the mu-ray when n = k+m and C is strictly positive"""
    _require_even(m)
    n = k + m
    half = m // 2
    hits = []
    if k % 2:
        for window in pair_windows(1, n, half):
            if all(i % 2 == 0 for i in window[0::2]):
                hits.append(WindingHit(window=window, orientation=1))
        return hits
    for window in pair_windows(1, n, half):
        if all(i % 2 == 1 for i in window[0::2]):
            hits.append(WindingHit(window=window, orientation=1))
    for j in pair_windows(2, n - 1, half - 1):
        if all(i % 2 == 0 for i in j[0::2]):
            hits.append(WindingHit(window=j + (n, 1), orientation=-1))
    return hits
