import asyncio
import logging
from concurrent.futures import ProcessPoolExecutor
from typing import AsyncIterator, List, Sequence

from ..arithmetic.ring_mq import get_context
from ..arithmetic.symbols import jacobi
from ..errors import ConfigurationError, RecordError
from ..models import EpRecord, Method, RunConfig
from .classgroup import two_adic_valuation, two_part_profile
from .sieve import primes_one_mod_four
from .sixteen import ep_record, oracle_e, unit_coeff_check

logger = logging.getLogger(__name__)


def compute_record(q: int, p: int, method: Method, oracle_cap: int) -> EpRecord:
    with_oracle = method.uses_oracle and q * p <= oracle_cap
    if method == Method.ORACLE and with_oracle:
        h = two_part_profile(q, p).h
        return EpRecord(q=q, p=p, chi=jacobi(-q, p), e=oracle_e(h), h=h, v2h=two_adic_valuation(h))
    return ep_record(q, p, with_oracle=with_oracle)


def compute_chunk(q: int, primes: Sequence[int], method: Method, oracle_cap: int) -> List[EpRecord]:
    records = []
    for p in primes:
        try:
            records.append(compute_record(q, p, method, oracle_cap))
        except Exception as e:
            raise RecordError(q, p, e) from e
    return records


def _chunks(primes: List[int], size: int) -> List[List[int]]:
    return [primes[i:i + size] for i in range(0, len(primes), size)]


def check_context(q: int):
    ctx = get_context(q)
    if not unit_coeff_check(ctx):
        raise ConfigurationError(f"unit coefficient check failed for q={q}")


async def run_batch(cfg: RunConfig) -> AsyncIterator[EpRecord]:
    """One record per (q, p), ordered by q then p whatever the worker count"""
    primes = primes_one_mod_four(cfg.x_max)
    for q in cfg.q_values:
        check_context(q)
        chunks = _chunks(primes, cfg.chunk_size)
        if cfg.method.uses_oracle and primes and q * primes[-1] > cfg.oracle_cap:
            logger.warning(f"q={q}: oracle skipped for p > {cfg.oracle_cap // q} (oracle_cap={cfg.oracle_cap})")
        logger.info(f"q={q}: {len(primes)} primes up to {cfg.x_max}, method={cfg.method.value}, jobs={cfg.jobs}")

        count = 0
        try:
            if cfg.jobs == 1:
                for chunk in chunks:
                    for record in compute_chunk(q, chunk, cfg.method, cfg.oracle_cap):
                        count += 1
                        yield record
            else:
                loop = asyncio.get_running_loop()
                with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
                    futures = [
                        loop.run_in_executor(pool, compute_chunk, q, chunk, cfg.method, cfg.oracle_cap)
                        for chunk in chunks
                    ]
                    try:
                        for future in futures:
                            for record in await future:
                                count += 1
                                yield record
                    finally:
                        for future in futures:
                            future.cancel()
        except RecordError as e:
            logger.error(f"Aborting run: {e}")
            raise
        logger.info(f"q={q}: {count} records")


async def collect(cfg: RunConfig) -> List[EpRecord]:
    return [record async for record in run_batch(cfg)]
