"""Drive the command-line batch from Python and read back what it wrote."""
import csv
import tempfile
from pathlib import Path

from gridmix import cli

out = Path(tempfile.mkdtemp()) / "results"
cli.main(["--out", str(out), "--sweep", "1.0,0.75,0.5"])
print(sorted(p.name for p in out.iterdir()))

with open(out / "comparison.csv") as fh:
    for row in csv.DictReader(fh):
        print(row["scenario"], row["thermal_share"], row["emissions_mt"])

# the LP behind one scenario, as text
cli.main(["--dump-lp", "res-100"])

# same thing from a shell:
#   gridmix --out results --sweep 1.0,0.9,0.8,0.7,0.6,0.5
#   python3 -m gridmix --potential india_potential_districts.csv --out results
