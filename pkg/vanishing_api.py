from flask import Blueprint, Response, jsonify, request
import msgspec

from algebra.errors import InternalConsistencyError, LocohError
from algebra.polyring import default_names
from algebra.polytext import parse_int_poly
from config import settings
from instances import InstanceFile
from reports import decide_report, encode_report, sweep_row

vanishing_bp = Blueprint("vanishing", __name__)

MODES = ("streaming", "baseline", "compare")


class BadRequest(LocohError):
    pass


def _instance(data):
    gens = data.get("generators")
    if not isinstance(gens, list) or not gens or not all(isinstance(g, str) for g in gens):
        raise BadRequest("'generators' must be a nonempty list of polynomial strings.")
    names = data.get("variables")
    if names is None:
        n = data.get("n")
        if not isinstance(n, int) or n < 1:
            raise BadRequest("Give 'n' or 'variables'.")
        names = default_names(n)
    names = tuple(names)
    polys = tuple(parse_int_poly(g, names) for g in gens)
    return InstanceFile(str(data.get("name") or "request"), len(names), names, polys, tuple(gens))


def _int(data, key, default=None):
    value = data.get(key, default)
    if not isinstance(value, int) or isinstance(value, bool):
        raise BadRequest(f"'{key}' must be an integer.")
    return value


def _options(data):
    mode = data.get("mode", settings.default_mode)
    if mode not in MODES:
        raise BadRequest(f"Unknown mode {mode!r}.")
    return dict(
        mode=mode,
        bound=str(data.get("bound", "finite-length")),
        max_steps=_int(data, "max_steps", settings.max_steps),
        check=settings.check_complexes,
        stable=settings.stable_reports,
    )


@vanishing_bp.route("/api/decide", methods=["POST"])
def decide():
    data = request.get_json(silent=True) or {}
    try:
        instance = _instance(data)
        report = decide_report(instance, _int(data, "prime"), _int(data, "degree"), **_options(data))
    except InternalConsistencyError as exc:
        return jsonify({"success": False, "message": str(exc)}), 500
    except LocohError as exc:
        return jsonify({"success": False, "message": str(exc)}), 400
    except Exception as exc:
        return jsonify({"success": False, "message": f"Internal error: {exc}"}), 500
    return Response(encode_report(report), mimetype="application/json")


@vanishing_bp.route("/api/sweep", methods=["POST"])
def sweep():
    data = request.get_json(silent=True) or {}
    try:
        instance = _instance(data)
        primes = data.get("primes")
        if not isinstance(primes, list) or not primes:
            raise BadRequest("'primes' must be a nonempty list.")
        if not all(isinstance(p, int) and not isinstance(p, bool) for p in primes):
            raise BadRequest("'primes' must hold integers.")
        degree = _int(data, "degree")
        options = _options(data)
        rows = [sweep_row(decide_report(instance, p, degree, **options)) for p in primes]
    except InternalConsistencyError as exc:
        return jsonify({"success": False, "message": str(exc)}), 500
    except LocohError as exc:
        return jsonify({"success": False, "message": str(exc)}), 400
    except Exception as exc:
        return jsonify({"success": False, "message": f"Internal error: {exc}"}), 500
    return jsonify({"success": True, "rows": msgspec.to_builtins(rows)})
