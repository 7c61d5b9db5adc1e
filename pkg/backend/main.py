from fastapi import FastAPI, HTTPException, Query
from fastapi.middleware.cors import CORSMiddleware
from typing import List
from datetime import datetime, timezone
import logging

from .errors import SedecimError
from .models import SUPPORTED_Q, DensityReport, EpRecord, HealthResponse, UnitTableRow
from .services.reports import density_report
from .services.sieve import primes_one_mod_four
from .services.sixteen import ep_record, unit_table_row

logger = logging.getLogger(__name__)

MAX_DENSITY_X = 100_000

app = FastAPI(title="Sedecim 16-rank API", version="1.0.0")

app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_credentials=True,
    allow_methods=["GET"],
    allow_headers=["*"],
)


def _check_q(q: int):
    if q not in SUPPORTED_Q:
        raise HTTPException(status_code=400, detail=f"q must be one of {list(SUPPORTED_Q)}")


@app.get("/health", response_model=HealthResponse)
async def health_check():
    return HealthResponse(status="healthy", timestamp=datetime.now(timezone.utc))


@app.get("/ep/{q}/{p}", response_model=EpRecord)
async def get_ep(q: int, p: int, oracle: bool = Query(False)):
    _check_q(q)
    try:
        return ep_record(q, p, with_oracle=oracle)
    except (ValueError, SedecimError) as e:
        raise HTTPException(status_code=400, detail=str(e))


@app.get("/density/{q}", response_model=DensityReport)
def get_density(q: int, x_max: int = Query(10_000, ge=2, le=MAX_DENSITY_X)):
    _check_q(q)
    records = [ep_record(q, p) for p in primes_one_mod_four(x_max)]
    return density_report(records, q, x_max)


@app.get("/tables", response_model=List[UnitTableRow])
async def get_tables():
    return [unit_table_row(q) for q in SUPPORTED_Q]


if __name__ == "__main__":
    import uvicorn
    uvicorn.run(app, host="0.0.0.0", port=8000)
