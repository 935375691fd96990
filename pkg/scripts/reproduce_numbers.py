from __future__ import annotations

from fractions import Fraction
import math
import sys
from pathlib import Path
import traceback

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

from bowen_series import (  # noqa: E402
    bowen_series,
    covering_degree,
    f_bs,
    h_map,
    hausdorff_mme,
    higher_bowen_series,
    lyapunov_bracket,
    mateability_report,
    minkowski_q,
    non_example_c,
    vertex_set,
)
from bowen_series.dimension import birkhoff_hausdorff_estimate  # noqa: E402


def main() -> int:
    print("[INFO] Bowen-Series quick check")

    for d in range(2, 5):
        print(f"[OK] BS({d}) covering degree: {covering_degree(bowen_series(d))}")
    print(f"[OK] hBS(3) covering degree: {covering_degree(higher_bowen_series(3))}")

    report = mateability_report(non_example_c())
    print(f"[OK] Non-example C item 1: {report.item(1).status} ({report.item(1).detail})")

    vertices = vertex_set(f_bs(), 3)
    print(f"[OK] f_bs rank-3 vertices: {len(vertices)}")
    bracket = lyapunov_bracket(f_bs(), 3)
    print(f"[OK] Rank-3 lower Lyapunov sum: {bracket.lower:.4f} (ln 3 = {math.log(3):.4f})")

    for variant in ("bs3", "hbs3"):
        estimate = hausdorff_mme(variant, 0.01 if variant == "bs3" else 0.02)
        print(f"[OK] HD({variant}) in [{estimate.lower:.4f}, {estimate.upper:.4f}] at rank {estimate.rank}")
    print(f"[OK] Monte-Carlo HD(hbs3): {birkhoff_hausdorff_estimate(20000):.4f}")

    print(f"[OK] ?(1/3) = {minkowski_q(Fraction(1, 3))}")
    value = h_map(Fraction(1, 3), depth=12)
    print(f"[OK] H(1/3) = {value.value:.9f} +/- {value.error:.2e}")

    print("[DONE] Quick check completed successfully.")
    return 0


if __name__ == "__main__":
    try:
        raise SystemExit(main())
    except Exception:
        print("[ERROR] Quick check failed.")
        traceback.print_exc()
        raise SystemExit(1)
