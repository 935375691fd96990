from __future__ import annotations

from pathlib import Path
from typing import Any

from mcp.server.fastmcp import FastMCP

from bowen_series import ReportYamlRepository, build_named_map, check_markov, hausdorff_mme, mateability_report
from bowen_series.catalog import CATALOG_MAPS
from bowen_series.circle_maps import as_piecewise
from bowen_series.conjugacy import is_dyadic, minkowski_q
from bowen_series.report_store import KIND_DIMENSION, KIND_VERIFY

mcp = FastMCP(
    "Bowen-Series MCP Server",
    instructions="Build catalog circle maps of punctured-sphere groups, verify them and estimate dimensions.",
    json_response=True,
)

DATA_DIR = Path(__file__).parent / "data"
REPOSITORY = ReportYamlRepository(DATA_DIR)


@mcp.resource("bowen://maps")
async def list_maps() -> list[str]:
    """List the catalog map names accepted by the tools."""
    return list(CATALOG_MAPS)


@mcp.tool()
def verify_map(name: str, d: int | None = None, k: int | None = None, samples: int = 100) -> dict[str, Any]:
    """Run the mateability report for a catalog map and save it."""
    try:
        report = mateability_report(build_named_map(name, d=d, k=k), samples=samples)
    except ValueError as error:
        REPOSITORY.log_failure(f"verify {name}", error)
        raise
    record = REPOSITORY.add_report(KIND_VERIFY, report.subject, report.passed, report.to_dict())
    return {"report_id": record.report_id, **report.to_dict()}


@mcp.tool()
def transition_matrix(name: str, d: int | None = None, k: int | None = None) -> dict[str, Any]:
    """Return the 0/1 transition matrix of a catalog map's Markov partition."""
    matrix = check_markov(as_piecewise(build_named_map(name, d=d, k=k)))
    return {**matrix.to_dict(), "row_sums": list(matrix.row_sums)}


@mcp.tool()
def hausdorff_dimension(variant: str = "bs3", target_width: float = 0.01) -> dict[str, Any]:
    """Bracket the dimension of the maximal-entropy measure of bs3 or hbs3."""
    estimate = hausdorff_mme(variant, target_width)
    REPOSITORY.add_report(KIND_DIMENSION, variant, estimate.reached, estimate.to_dict())
    return estimate.to_dict()


@mcp.tool()
def question_mark(x: str) -> dict[str, Any]:
    """Minkowski ?(x) for a rational x in [0, 1], e.g. "1/3"."""
    q = minkowski_q(x)
    return {"x": x, "q": str(q), "dyadic": is_dyadic(q)}


@mcp.tool()
def list_saved_reports(kind: str | None = None) -> list[dict[str, Any]]:
    """Return saved reports, optionally filtered by kind."""
    return [record.to_dict() for record in REPOSITORY.get_reports(kind)]


def main() -> None:
    mcp.run()


if __name__ == "__main__":
    main()
