"""Run the verification campaign and write a JSON summary.

Usage: python3 scripts/run_campaign.py [OUT.json] [--k-range 2..4] [--extras 2]
Any further arguments are forwarded to ``arnoldbif verify``.
"""
import contextlib
import io
import json
import sys

from arnoldbif.cli import main as cli_main


def main(argv: list[str]) -> int:
    out_path = argv[0] if argv and not argv[0].startswith("-") else None
    rest = argv[1:] if out_path else argv
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        code = cli_main(["verify", "--deep", *rest])
    result = json.loads(buf.getvalue())
    print(f"cells {result['cells_passed']}/{result['cells']}  passed={result['passed']}")
    if out_path:
        with open(out_path, "w") as fh:
            json.dump(result, fh, indent=2)
    return code


if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
