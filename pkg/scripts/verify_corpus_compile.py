"""Check every corpus sample against its sidecar's "compile" flag with a real rustc.

Usage: python scripts/verify_corpus_compile.py [corpus_dir] [--rustc PATH]

Runs outside the tool on purpose: the analyzer never invokes a compiler.
Exit status 1 if any sample's compile outcome disagrees with its sidecar.
"""
from __future__ import annotations

import argparse
import json
import shutil
import subprocess
import sys
import tempfile
from pathlib import Path


def expected_compile(sample: Path) -> bool:
    sidecar = sample.with_name(sample.name[:-3] + ".expected.json")
    if not sidecar.exists():
        return True
    return bool(json.loads(sidecar.read_text(encoding="utf-8")).get("compile", True))


def compiles(rustc: str, sample: Path, out_dir: Path) -> tuple[bool, str]:
    proc = subprocess.run(
        [rustc, "--edition", "2024", "--crate-type", "bin", "-A", "warnings",
         "-o", str(out_dir / "sample"), str(sample)],
        capture_output=True, text=True,
    )  # fmt: skip
    return proc.returncode == 0, proc.stderr


def main(argv: list[str] | None = None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("corpus", nargs="?", default=Path(__file__).resolve().parent.parent / "corpus", type=Path)
    ap.add_argument("--rustc", default=shutil.which("rustc") or "rustc")
    args = ap.parse_args(argv)
    version = subprocess.run([args.rustc, "--version"], capture_output=True, text=True).stdout.strip()
    print(f"using {version}")
    bad = 0
    with tempfile.TemporaryDirectory() as tmp:
        for sample in sorted(args.corpus.glob("*/*.rs")):
            want = expected_compile(sample)
            got, err = compiles(args.rustc, sample, Path(tmp))
            ok = want == got
            bad += not ok
            print(f"{'ok  ' if ok else 'MISMATCH'} {sample.relative_to(args.corpus)} (sidecar compile={want}, rustc={got})")
            if not ok and err:
                print("    " + "\n    ".join(err.strip().splitlines()[:6]))
    print(f"{bad} mismatch(es)")
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
