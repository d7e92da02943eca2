"""Write every acceptance instance under networks/ as network documents.

Single instances become ``<name>.json``; families become ``<name>.jsonl`` with one
``{"label": ..., "network": {...}}`` object per line. ``--check`` compares instead of writing.
"""

import argparse
import json
import sys
from pathlib import Path

from creditfreeze.corpus import acceptance_bundles
from creditfreeze.document import emit_network, network_to_data

ROOT = Path(__file__).resolve().parent.parent / "networks"


def render(entries) -> tuple[str, str]:
    if len(entries) == 1:
        return ".json", emit_network(entries[0][1])
    lines = [json.dumps({"label": label, "network": network_to_data(net)}) for label, net in entries]
    return ".jsonl", "\n".join(lines) + "\n"


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--check", action="store_true", help="fail if any document differs from the generators")
    ap.add_argument("--out", type=Path, default=ROOT)
    args = ap.parse_args(argv)
    args.out.mkdir(parents=True, exist_ok=True)
    stale = []
    for name, entries in acceptance_bundles().items():
        ext, text = render(entries)
        path = args.out / f"{name}{ext}"
        if args.check:
            if not path.exists() or path.read_text() != text:
                stale.append(path.name)
        else:
            path.write_text(text)
            print(f"{path.name}: {len(entries)} network(s)")
    if stale:
        print("out of date: " + ", ".join(stale), file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
