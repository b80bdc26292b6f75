"""
Scanning the Dwork pencil
=========================

x0^3 + x1^3 + x2^3 = lam x0 x1 x2 over F_13.  Each cell records smoothness,
the splitting coefficient and (for smooth members) ordinarity.  The scan file
is append-only, so a second run adds nothing.
"""

import tempfile
from pathlib import Path

from charp import FamilySpec
from charp.cli import run_scan, summarize

specs = [FamilySpec("dwork", 13, n=2, lam=lam) for lam in range(13)]
out = Path(tempfile.mkdtemp()) / "dwork13.jsonl"

records, new = run_scan(specs, out)
for rec in records:
    split = next(v for v in rec["verdicts"] if v["kind"] == "split")
    smooth = rec["verdicts"][0]["value"]
    print(f"lam={rec['family']['lam']:2d}  smooth={smooth!s:5}  coefficient={split['evidence']['coefficient']:2d}")

print(summarize(records)["counts"])
print("rerun adds", len(run_scan(specs, out)[1]), "rows")
