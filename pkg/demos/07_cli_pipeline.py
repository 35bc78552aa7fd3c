"""
The command line end to end
===========================

Every capability is also a `provar` subcommand.  The `pipeline`
subcommand chains sample -> covariance -> persist -> fit and drops all
artifacts (CSV, JSON, SVG, summary) into one directory; identical flags
and seed reproduce identical bytes.
"""

import json
import os

from provar.cli import main

outdir = os.path.join(os.path.dirname(__file__), "output", "pipeline_elliptic")

# equivalent to: provar --seed 7 pipeline --variety elliptic --n 300 \
#                       --outdir <outdir>
code = main(["--seed", "7", "pipeline", "--variety", "elliptic",
             "--n", "300", "--outdir", outdir])
print("exit code: %d" % code)

with open(os.path.join(outdir, "summary.json")) as fh:
    summary = json.load(fh)
print("\nsummary.json:")
for key in ("variety", "n", "seed", "max_scale", "simplex_count",
            "betti_summary", "selected_degree", "fit_residual_rms"):
    print("  %-18s %s" % (key, summary[key]))

print("\nartifacts in %s:" % os.path.relpath(outdir))
for name in sorted(os.listdir(outdir)):
    size = os.path.getsize(os.path.join(outdir, name))
    print("  %-18s %6d bytes" % (name, size))

# the one-shot subcommands cover the same ground piecewise; a few
# self-contained examples (see --help for the full flag list):
#
#   provar normalize --density const:1 --box 0,6
#   provar sample --variety torus --R 2 --r 0.5 --n 500 --out cloud.csv
#   provar covariance --in cloud.csv --out cov.json --svg cov.svg
#   provar persist --in cloud.csv --maxdim 2 --out pd.json --svg pd.svg
#   provar fit --in cloud.csv --maxdeg 5 --threshold 1e-6 --out fit.json
