#!/usr/bin/env python3
"""Regenerate the bundled synthetic monthly dataset.

Five series over 2018-02..2021-04 with an intervention at 2020-03 (the 26th
month). True coefficients are the published estimates for Indonesian FinTech
lending; AR(1) noise (phi = 0.3) with innovation scale matched per series to
the published t-statistic magnitudes. Everything is seeded, so the CSV is
reproducible byte-for-byte.

Usage: python scripts/make_demo_data.py [out.csv]
"""

from __future__ import annotations

import sys
from pathlib import Path

from itsa.arma import ar1
from itsa.design import TimeSeriesDataset
from itsa.ingest import write_dataset_csv
from itsa.periods import Period
from itsa.simulate import SimulationSpec, gen_its_dataset

START = Period(2018, 2)
N = 39
INTERVENTION_INDEX = 26
PHI = 0.3

# (true beta, innovation sd, seed) per series
SERIES = {
    "BJ": ((-27.782, 243.993, -3665.934, 248.572), 640.0, 101),
    "BLJ": ((-4.442, 40.581, -762.727, 96.908), 255.0, 102),
    "BT": ((-25.251, 284.144, -4408.780, 341.676), 793.0, 103),
    "TKB90": ((100.344, -0.195, -0.308, 0.184), 0.79, 104),
    "TWP90": ((-0.336, 0.194, 0.306, -0.183), 0.76, 105),
}


def build_dataset() -> TimeSeriesDataset:
    values = {}
    periods = None
    for name, (beta, sd, seed) in SERIES.items():
        spec = SimulationSpec(
            n=N,
            intervention_index=INTERVENTION_INDEX,
            beta=beta,
            error=ar1(PHI, sd * sd),
            seed=seed,
            start_period=START,
            label=name,
        )
        ds = gen_its_dataset(spec)
        values[name] = ds.values[name]
        periods = ds.periods
    return TimeSeriesDataset(periods, values)


def main() -> int:
    out = Path(sys.argv[1]) if len(sys.argv) > 1 else (
        Path(__file__).resolve().parent.parent / "data" / "fintech_monthly_synthetic.csv"
    )
    out.parent.mkdir(parents=True, exist_ok=True)
    write_dataset_csv(build_dataset(), out)
    print(f"wrote {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
