from __future__ import annotations

import argparse
import sys
from pathlib import Path

from acr_dsl.lower import PRESETS, function_from_text, set_from_text
from acr_dsl.plot import emit_plot, write_csv, write_membership_svg, write_svg
from acr_spaces.classifier import classify
from acr_spaces.errors import AnalysisError

# the first three intervals of the AC counterexample, widths 1/1^2, 1/2^2, 1/3^2
FIGURE_MARKS = "{[0,1] [2,9/4] [4,37/9]}"


def main() -> int:
    repo_root = Path(__file__).resolve().parents[1]

    parser = argparse.ArgumentParser(
        description="Render the periodic square-root figure and the membership chart."
    )
    parser.add_argument(
        "--out-dir",
        default=repo_root / "data" / "exports",
        help="Output directory (default: data/exports)",
    )
    parser.add_argument("--samples", type=int, default=701)
    args = parser.parse_args()

    out_dir = Path(args.out_dir)
    try:
        table = emit_plot(
            function_from_text("sqrt_periodic"), -1, 6, args.samples, set_from_text(FIGURE_MARKS)
        )
        write_csv(table, out_dir / "sqrt_periodic.csv")
        write_svg(table, out_dir / "sqrt_periodic.svg", title="sqrt_periodic")

        placements = [classify(function_from_text(name)) for name in PRESETS]
        write_membership_svg(placements, out_dir / "venn.svg")
    except AnalysisError as e:
        print(f"Rendering failed: {e}", file=sys.stderr)
        return 1

    print(f"Wrote figures to {out_dir}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
