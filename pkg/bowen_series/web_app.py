from __future__ import annotations

from datetime import datetime
from pathlib import Path
from typing import Any, Callable

from flask import Flask, Response, jsonify, request

from .catalog import CATALOG_MAPS, build_named_map, describe, group_presentation
from .circle_maps import as_piecewise, check_markov, mateability_report
from .conjugacy import is_dyadic, minkowski_q
from .dimension import DEFAULT_TARGET_WIDTH, hausdorff_mme
from .render import render_tessellation
from .report_store import KIND_DIMENSION, KIND_VERIFY, REPORT_KINDS, ReportYamlRepository

WEB_TESSELLATION_DEPTH = 4


def create_app(
    data_dir: str | Path = "data",
    now_provider: Callable[[], datetime] | None = None,
) -> Flask:
    app = Flask(__name__)
    repository = ReportYamlRepository(data_dir)
    clock: Callable[[], datetime] = now_provider or datetime.now

    def _failed(subject: str, error: ValueError) -> Any:
        repository.log_failure(subject, error, clock())
        return jsonify({"ok": False, "message": str(error)}), 400

    @app.after_request
    def add_cors_headers(response: Any) -> Any:
        response.headers["Access-Control-Allow-Origin"] = "*"
        response.headers["Access-Control-Allow-Methods"] = "GET,POST,OPTIONS"
        response.headers["Access-Control-Allow-Headers"] = "Content-Type"
        return response

    @app.get("/api/maps")
    def get_maps() -> Any:
        name = request.args.get("map")
        if not name:
            return jsonify({"ok": True, "maps": list(CATALOG_MAPS)})
        try:
            obj = _map_from_query(name)
        except ValueError as error:
            return jsonify({"ok": False, "message": str(error)}), 400
        return jsonify({"ok": True, "map": describe(obj)})

    @app.get("/api/verify")
    def get_verify() -> Any:
        name = str(request.args.get("map", "bs"))
        try:
            obj = _map_from_query(name)
            report = mateability_report(obj, samples=_int_arg("samples", 100), seed=_int_arg("seed", 2024))
        except ValueError as error:
            return _failed(f"verify {name}", error)
        record = repository.add_report(KIND_VERIFY, report.subject, report.passed, report.to_dict(), now=clock())
        return jsonify({"ok": True, "report_id": record.report_id, "report": report.to_dict()})

    @app.get("/api/matrix")
    def get_matrix() -> Any:
        name = str(request.args.get("map", "bs"))
        try:
            matrix = check_markov(as_piecewise(_map_from_query(name)))
        except ValueError as error:
            return _failed(f"matrix {name}", error)
        if request.args.get("format") == "csv":
            return Response(matrix.to_csv(), mimetype="text/csv")
        return jsonify({"ok": True, "matrix": matrix.to_dict(), "row_sums": list(matrix.row_sums)})

    @app.get("/api/dimension")
    def get_dimension() -> Any:
        variant = str(request.args.get("variant", "bs3"))
        try:
            width = float(request.args.get("target_width", DEFAULT_TARGET_WIDTH))
            estimate = hausdorff_mme(variant, width)
        except ValueError as error:
            return _failed(f"dimension {variant}", error)
        record = repository.add_report(KIND_DIMENSION, variant, estimate.reached, estimate.to_dict(), now=clock())
        return jsonify({"ok": True, "report_id": record.report_id, "estimate": estimate.to_dict()})

    @app.get("/api/qmark")
    def get_qmark() -> Any:
        text = str(request.args.get("x", "")).strip()
        if not text:
            return jsonify({"ok": False, "message": "x is required."}), 400
        try:
            q = minkowski_q(text)
        except (ValueError, ZeroDivisionError) as error:
            return jsonify({"ok": False, "message": str(error)}), 400
        return jsonify({"ok": True, "x": text, "q": str(q), "dyadic": is_dyadic(q)})

    @app.get("/api/render/tessellation")
    def get_tessellation() -> Any:
        group = str(request.args.get("group", "G2"))
        try:
            depth = _int_arg("depth", 2)
            if depth > WEB_TESSELLATION_DEPTH:
                raise ValueError(f"depth is capped at {WEB_TESSELLATION_DEPTH} over HTTP")
            svg = render_tessellation(group_presentation(group), depth)
        except ValueError as error:
            return jsonify({"ok": False, "message": str(error)}), 400
        return Response(svg, mimetype="image/svg+xml")

    @app.get("/api/reports")
    def get_reports() -> Any:
        kind = request.args.get("kind")
        if kind is not None and kind not in REPORT_KINDS:
            return jsonify({"ok": False, "message": f"unknown report kind: {kind}"}), 400
        records = sorted(repository.get_reports(kind), key=lambda record: record.created_at, reverse=True)
        return jsonify({"ok": True, "reports": [record.to_dict() for record in records]})

    @app.post("/api/reports/delete")
    def delete_report() -> Any:
        payload = request.get_json(silent=True) or {}
        report_id = str(payload.get("report_id", "")).strip()
        if not report_id:
            return jsonify({"ok": False, "message": "report_id is required."}), 400
        if repository.get_report(report_id) is None:
            return jsonify({"ok": False, "message": "report not found."}), 404
        deleted = repository.delete_report(report_id, now=clock())
        return jsonify({"ok": True, "report": deleted.to_dict()})

    return app


def _int_arg(name: str, default: int) -> int:
    raw = request.args.get(name)
    if raw is None or raw == "":
        return default
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"{name} must be an integer") from None


def _map_from_query(name: str) -> Any:
    selection_text = request.args.get("selection")
    selection = [int(part) for part in selection_text.split(",") if part.strip()] if selection_text else None
    d = request.args.get("d")
    k = request.args.get("k")
    return build_named_map(
        name,
        d=int(d) if d else None,
        k=int(k) if k else None,
        selection=selection,
    )


if __name__ == "__main__":
    app = create_app()
    app.run(host="127.0.0.1", port=5000, debug=False)
