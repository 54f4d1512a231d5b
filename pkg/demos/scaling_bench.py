"""
Running time against Delta
==========================

Sweep Delta = p_max + w_max over powers of two with the bench command and fit
the log-log slope of the exact unbounded solver.
"""

import io
from contextlib import redirect_stdout

from monoknap import cli

buf = io.StringIO()
with redirect_stdout(buf):
    cli.main(["bench", "--solver", "unbounded", "--kernel", "naive", "--n", "16",
              "--delta-sweep", "8:11", "--repeat", "2"])
rows = cli.read_bench_csv(buf.getvalue())
for row in rows:
    delta = int(row["p_max"]) + int(row["w_max"])
    print(f"Delta={delta:5d} W={row['W']:>5} time={int(row['wall_nanos']) / 1e6:8.1f} ms value={row['value']}")

slopes = cli.scaling_exponents(rows)
print("fitted exponent:", round(slopes[("unbounded", "naive")], 2))
