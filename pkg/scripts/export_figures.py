"""
export_figures.py — Write every figure preset to a directory of curve files.

One file per curve, named <figure>_v<variant>.<format>. Files are
byte-identical across runs.

Usage:
    python scripts/export_figures.py --out-dir figures --format csv
    python scripts/export_figures.py --out-dir figures --only fig5 fig6
"""

import argparse
import os
import sys
from typing import Optional

# Add parent dir to path so we can import from quench_complexity
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from quench_complexity.curve_export import emit_curve
from quench_complexity.experiments import evaluate_scenario
from quench_complexity.figure_presets import figure_preset, figure_presets


def export_all(out_dir: str, fmt: str, only: Optional[list[str]] = None) -> list[str]:
    """Export the selected presets; returns the written paths in preset order."""
    os.makedirs(out_dir, exist_ok=True)
    written = []
    for figure_id, variant, description in figure_presets():
        if only and figure_id not in only:
            continue
        scenario = figure_preset(figure_id, variant)
        result = evaluate_scenario(scenario)
        path = os.path.join(out_dir, f"{figure_id}_v{variant}.{fmt}")
        emit_curve(result.samples, fmt, path, scenario, figure=f"{figure_id}/{variant}",
                   nonpositive_denominators=result.nonpositive_denominators)
        print(f"  {figure_id}/{variant}  {description}  →  {path}")
        written.append(path)
    return written


def main():
    parser = argparse.ArgumentParser(description="Export every figure preset")
    parser.add_argument("--out-dir", default="figures", help="Directory for the curve files")
    parser.add_argument("--format", choices=["csv", "json"], default="csv")
    parser.add_argument("--only", nargs="*", help="Figure ids to export (default: all)")
    args = parser.parse_args()

    print(f"Exporting presets to {args.out_dir}/ ...")
    written = export_all(args.out_dir, args.format, args.only)
    print(f"\n{len(written)} files written")


if __name__ == "__main__":
    main()
