from decimal import Decimal, ROUND_HALF_EVEN, localcontext
from fractions import Fraction
from typing import Iterable, List
import logging
import math

from ..models import Checkpoint, DensityReport, EpRecord, VerifyResult
from .classgroup import two_adic_valuation
from .sixteen import oracle_e

logger = logging.getLogger(__name__)


def render_ratio(count: int, total: int, decimals: int = 6) -> str:
    if total == 0:
        return "NA"
    return render_decimal(Fraction(count, total), decimals)


def render_decimal(value: Fraction, decimals: int = 6) -> str:
    with localcontext() as ctx:
        ctx.prec = 50
        exact = Decimal(value.numerator) / Decimal(value.denominator)
        return str(exact.quantize(Decimal(1).scaleb(-decimals), rounding=ROUND_HALF_EVEN))


def _is_power_of_two(n: int) -> bool:
    return n > 0 and n & (n - 1) == 0


def density_report(
    records: Iterable[EpRecord],
    q: int,
    x_max: int,
    decimals: int = 6,
    cancellation_factor: float = 3,
) -> DensityReport:
    rows = sorted((r for r in records if r.q == q), key=lambda r: r.p)
    n1 = len(rows)
    ks = [r.predicted_k for r in rows]
    count4 = sum(1 for k in ks if k >= 2)
    count8 = sum(1 for k in ks if k >= 3)
    count16 = sum(1 for k in ks if k == 4)

    oracle_rows = [r for r in rows if r.h is not None]
    count2 = sum(1 for r in oracle_rows if r.h % 2 == 0) if oracle_rows else None

    partial = 0
    max_abs = 0
    nonzero = 0
    checkpoints: List[Checkpoint] = []
    for index, r in enumerate(rows, start=1):
        partial += r.e
        nonzero += r.e != 0
        max_abs = max(max_abs, abs(partial))
        if _is_power_of_two(index) or index == n1:
            checkpoints.append(Checkpoint(index=index, p=r.p, partial_sum=partial))

    bound = cancellation_factor * math.sqrt(nonzero)
    report = DensityReport(
        q=q,
        x_max=x_max,
        n1=n1,
        count2=count2,
        count4=count4,
        count8=count8,
        count16=count16,
        ratio2=render_ratio(count2 or 0, len(oracle_rows), decimals),
        ratio4=render_ratio(count4, n1, decimals),
        ratio8=render_ratio(count8, n1, decimals),
        ratio16=render_ratio(count16, n1, decimals),
        partial_sum=partial,
        max_abs_partial=max_abs,
        nonzero_count=nonzero,
        cancellation_bound=f"{bound:.{decimals}f}",
        cancellation_ok=max_abs <= bound,
        checkpoints=checkpoints,
    )
    logger.info(
        f"q={q}, x<={x_max}: n1={n1}, 4|h {report.ratio4}, 8|h {report.ratio8}, "
        f"16|h {report.ratio16}, sum e_p={partial}, max |partial|={max_abs}"
    )
    return report


def _mismatch(record: EpRecord) -> bool:
    if record.h % 2:
        return True
    k = min(two_adic_valuation(record.h), 4)
    return record.e != oracle_e(record.h) or record.predicted_k != k


def verify(records: Iterable[EpRecord]) -> VerifyResult:
    checked = 0
    skipped = 0
    mismatches = []
    for record in records:
        if record.h is None:
            skipped += 1
            continue
        checked += 1
        if _mismatch(record):
            mismatches.append(record)
    if mismatches:
        logger.error(f"{len(mismatches)} of {checked} records contradict the class number")
    else:
        logger.info(f"Verified {checked} records, skipped {skipped} without class numbers")
    return VerifyResult(checked=checked, skipped=skipped, mismatches=mismatches)
