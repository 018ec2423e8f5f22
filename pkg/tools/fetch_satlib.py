"""Download the SATLIB uf20-91 / uf50-218 archives and extract instances 01-03.

    python tools/fetch_satlib.py OUT_DIR

The vendored files in tests/data are seeded surrogates with the same
shape (see tools/make_instances.py) because the build environment had no
route to SATLIB.  Running this script with network access fetches the
originals; point ``isingdecomp bench`` at OUT_DIR to use them.  No
checksums are pinned here since none could be verified when this was
written.
"""

import argparse
import io
import sys
import tarfile
import urllib.request
from pathlib import Path

BASE = "https://www.cs.ubc.ca/~hoos/SATLIB/Benchmarks/SAT/RND3SAT"
ARCHIVES = {"uf20-91.tar.gz": "uf20-0{}.cnf", "uf50-218.tar.gz": "uf50-0{}.cnf"}


def fetch(out: Path, indices=(1, 2, 3)) -> list[Path]:
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for archive, pattern in ARCHIVES.items():
        with urllib.request.urlopen(f"{BASE}/{archive}", timeout=60) as resp:
            blob = resp.read()
        wanted = {pattern.format(i) for i in indices}
        with tarfile.open(fileobj=io.BytesIO(blob), mode="r:gz") as tar:
            for member in tar.getmembers():
                name = Path(member.name).name
                if member.isfile() and name in wanted:
                    target = out / name
                    target.write_bytes(tar.extractfile(member).read())
                    written.append(target)
    return written


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("out", type=Path)
    args = ap.parse_args()
    try:
        paths = fetch(args.out)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    for p in paths:
        print(p)
    return 0


if __name__ == "__main__":
    sys.exit(main())
