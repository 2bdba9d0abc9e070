"""From a raw event log to a matrix-valued test: weekly footfall rhythm.

Synthesizes four weeks of venue check-ins where weekend activity
concentrates in one corner of the city, bins them into daily count
matrices on a 20x20 grid, and tests the day-to-day sequence of matrices
for serial dependence. A short-lag weight misses the pattern; a weight
tuned to a 7-day period finds it immediately.

    python3 demos/05_checkin_grid.py
"""

from datetime import datetime, timedelta

import numpy as np

from wise import kernels, run_test, weights
from wise.ingest import CheckinRecord, GridConfig, ingest_checkins

rng = np.random.default_rng(11)
records = []
start = datetime(2012, 4, 2)  # a Monday
for day in range(28):
    stamp = start + timedelta(days=day)
    weekend = stamp.weekday() >= 5
    for _ in range(120):
        if weekend:
            # weekend crowds pack into the south-west quadrant
            lat, lon = rng.uniform(35.5, 35.7), rng.uniform(139.0, 139.5)
        else:
            lat, lon = rng.uniform(35.5, 35.9), rng.uniform(139.0, 140.0)
        hour = int(rng.integers(8, 23))
        records.append(CheckinRecord(stamp + timedelta(hours=hour), lat, lon))

result = ingest_checkins(records, GridConfig())
print(f"ingested {result.kept} check-ins into {result.series.n} daily "
      f"{result.series.data.shape[1]}x{result.series.data.shape[2]} count matrices")
print(f"dropped outside box: {result.dropped_outside_box}")

# Matrix observations plug straight in; the Frobenius kernel compares whole
# daily maps.
for name, spec in [("default", weights.default_weight()),
                   ("abs_cosine l=7", weights.abs_cosine(7.0))]:
    r = run_test(result.series, kernels.frobenius(), spec)
    print(f"  {name:15s} Z_G = {r.z_g:+7.3f}   p = {r.p_value:.4f}")

# The weekly cycle sits at lag 7, exactly where the period-7 weight puts
# its mass and where the short-lag default has almost none.
