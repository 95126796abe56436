"""HTTP API for interactive configuration and conflict resolution.

One configuration session per process by default (``--multi`` enables
named sessions).  All JSON responses carry the session's generation
counter; the counter advances on every mutation, and a fix set computed
for generation g is only applicable while the session is still at g.

Endpoints live under both ``/api`` and the frozen ``/api/v1`` prefix:

- ``GET  tree``     menu hierarchy with type, prompt, visibility, value
- ``GET  config``   current configuration as .config text
- ``PUT  config``   replace configuration from .config text
- ``POST desired``  stage, unstage or replace desired changes
- ``POST fixes``    resolve the staged conflict (at most three fixes)
- ``POST apply``    apply one fix by index, report applicability
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse, PlainTextResponse
from fastapi.staticfiles import StaticFiles

from .dotconfig import DotConfigError, apply_fix, load_dotconfig, save_dotconfig
from .evaluate import (
    Configuration,
    member_visibility,
    recalculate,
    validate,
    visibility,
)
from .kconfig import KconfigModel, load_model
from .kconfig.ast import MenuNode, SymbolType
from .kconfig.pretty import format_expr
from .rangefix import Fix, Limits, resolve_conflict
from .tristate import (
    MOD,
    NO,
    YES,
    SymbolValue,
    hex_value,
    int_value,
    str_value,
    tri_value,
)

_TRI_NAMES = {NO: "n", MOD: "m", YES: "y"}


@dataclass
class Session:
    """One configuration under edit plus staged changes and cached fixes."""

    model: KconfigModel
    cfg: Configuration
    generation: int = 0
    desired: list[tuple[str, SymbolValue]] = field(default_factory=list)
    fixes: list[Fix] = field(default_factory=list)
    fixes_generation: int = -1
    fixes_timed_out: bool = False
    lock: threading.Lock = field(default_factory=threading.Lock)

    def bump(self) -> None:
        self.generation += 1
        self.fixes = []
        self.fixes_generation = -1


class ApiError(Exception):
    def __init__(self, status: int, message: str):
        super().__init__(message)
        self.status = status
        self.message = message


def _parse_target(model: KconfigModel, name: str, raw: str) -> SymbolValue:
    sym = model.symbols.get(name)
    if sym is None:
        raise ApiError(404, f"unknown symbol {name}")
    if sym.is_bool_like():
        levels = {"n": NO, "m": MOD, "y": YES}
        if raw not in levels:
            raise ApiError(422, f"{name} is {sym.type.value}; target must be y, m or n")
        if sym.type is SymbolType.BOOL and raw == "m":
            raise ApiError(422, f"{name} is bool; target must be y or n")
        return tri_value(levels[raw])
    if sym.type is SymbolType.INT:
        try:
            return int_value(int(raw, 10))
        except ValueError:
            raise ApiError(422, f"{name} expects a decimal integer")
    if sym.type is SymbolType.HEX:
        try:
            return hex_value(int(raw, 16))
        except ValueError:
            raise ApiError(422, f"{name} expects a hex value")
    return str_value(raw)


def _symbol_json(session: Session, name: str) -> dict:
    model, cfg = session.model, session.cfg
    sym = model.symbols[name]
    if sym.choice is not None:
        vis = member_visibility(model, cfg, name)
    else:
        vis = visibility(model, cfg, sym)
    prompt = sym.prompts[0].text if sym.prompts else ""
    return {
        "kind": "symbol",
        "symbol": name,
        "type": sym.type.value,
        "prompt": prompt,
        "visibility": _TRI_NAMES[vis],
        "value": str(cfg.effective[name]),
        "choiceMember": sym.choice is not None,
    }


def _tree_json(session: Session, node: MenuNode) -> list[dict]:
    out: list[dict] = []
    for child in node.children:
        if child.kind in ("config", "menuconfig"):
            entry = _symbol_json(session, child.symbol)
            if child.children:
                entry["children"] = _tree_json(session, child)
            out.append(entry)
        elif child.kind == "menu":
            out.append(
                {
                    "kind": "menu",
                    "prompt": child.prompt,
                    "children": _tree_json(session, child),
                }
            )
        elif child.kind == "choice":
            members = [_symbol_json(session, m) for m in child.choice.members]
            prompt = ""
            for p in child.choice.prompts:
                prompt = p.text
                break
            out.append(
                {
                    "kind": "choice",
                    "prompt": prompt,
                    "type": child.choice.type.value,
                    "children": members,
                }
            )
        elif child.kind == "if":
            out.extend(_tree_json(session, child))
    return out


def _fix_entry_json(entry) -> dict:
    data: dict = {
        "symbols": list(entry.symbols),
        "desired": entry.desired,
        "text": entry.render(),
    }
    if entry.value is not None:
        data["value"] = str(entry.value)
    else:
        data["constraint"] = format_expr(entry.constraint)
        if entry.witness is not None:
            data["witness"] = str(entry.witness)
    return data


def _fixes_json(session: Session) -> list[dict]:
    return [
        {
            "index": i,
            "size": len(fix.entries),
            "entries": [_fix_entry_json(e) for e in fix.entries],
            "text": fix.render(),
        }
        for i, fix in enumerate(session.fixes)
    ]


def create_app(
    model_path: str,
    multi: bool = False,
    static_dir: str | None = None,
    limits: Limits | None = None,
) -> FastAPI:
    model = load_model(model_path)
    limits = limits or Limits()
    app = FastAPI(title="kfix configurator API")
    sessions: dict[str, Session] = {}
    sessions_lock = threading.Lock()

    def get_session(request: Request) -> Session:
        name = request.query_params.get("session", "default")
        if name != "default" and not multi:
            raise ApiError(404, "multi-session support is disabled")
        with sessions_lock:
            session = sessions.get(name)
            if session is None:
                session = Session(model=model, cfg=recalculate(model, {}))
                sessions[name] = session
            return session

    @app.exception_handler(ApiError)
    async def handle_api_error(request: Request, exc: ApiError):
        return JSONResponse({"error": exc.message}, status_code=exc.status)

    def register(path: str, methods: list[str]):
        def wrap(fn):
            for prefix in ("/api", "/api/v1"):
                app.add_api_route(prefix + path, fn, methods=methods)
            return fn

        return wrap

    @register("/tree", ["GET"])
    def get_tree(request: Request):
        session = get_session(request)
        with session.lock:
            return {
                "generation": session.generation,
                "mainmenu": model.mainmenu,
                "tree": _tree_json(session, model.root),
            }

    @register("/config", ["GET"])
    def get_config(request: Request):
        session = get_session(request)
        with session.lock:
            text = save_dotconfig(session.cfg, model)
            return PlainTextResponse(
                text, headers={"X-Generation": str(session.generation)}
            )

    @register("/config", ["PUT"])
    async def put_config(request: Request):
        session = get_session(request)
        body = (await request.body()).decode("utf-8", errors="replace")
        with session.lock:
            try:
                cfg, warnings = load_dotconfig(body, model)
            except DotConfigError as exc:
                raise ApiError(422, str(exc))
            session.cfg = cfg
            session.bump()
            return {
                "generation": session.generation,
                "warnings": warnings,
                "valid": not validate(model, cfg),
            }

    def desired_json(session: Session) -> dict:
        return {
            "generation": session.generation,
            "desired": [
                {"symbol": n, "target": str(v)} for n, v in session.desired
            ],
        }

    @register("/desired", ["POST"])
    async def post_desired(request: Request):
        session = get_session(request)
        body = await request.json()
        if not isinstance(body, dict):
            raise ApiError(422, "body must be a JSON object")
        ops = [k for k in ("set", "remove", "replace") if k in body]
        if len(ops) != 1:
            raise ApiError(422, "body must contain exactly one of set/remove/replace")
        op = ops[0]
        with session.lock:
            if op == "set":
                item = body["set"]
                if not isinstance(item, dict) or "symbol" not in item:
                    raise ApiError(422, "set expects {symbol, target}")
                name = item["symbol"]
                value = _parse_target(model, name, str(item.get("target", "")))
                session.desired = [
                    (n, v) for n, v in session.desired if n != name
                ]
                session.desired.append((name, value))
            elif op == "remove":
                name = body["remove"]
                if name not in model.symbols:
                    raise ApiError(404, f"unknown symbol {name}")
                before = len(session.desired)
                session.desired = [
                    (n, v) for n, v in session.desired if n != name
                ]
                if len(session.desired) == before:
                    raise ApiError(422, f"{name} is not staged")
            else:
                items = body["replace"]
                if not isinstance(items, list):
                    raise ApiError(422, "replace expects a list of {symbol, target}")
                fresh: list[tuple[str, SymbolValue]] = []
                seen: set[str] = set()
                for item in items:
                    if not isinstance(item, dict) or "symbol" not in item:
                        raise ApiError(422, "replace expects a list of {symbol, target}")
                    name = item["symbol"]
                    if name in seen:
                        raise ApiError(422, f"duplicate desired entry {name}")
                    seen.add(name)
                    fresh.append(
                        (name, _parse_target(model, name, str(item.get("target", ""))))
                    )
                session.desired = fresh
            session.bump()
            return desired_json(session)

    @register("/desired", ["GET"])
    def get_desired(request: Request):
        session = get_session(request)
        with session.lock:
            return desired_json(session)

    @register("/fixes", ["POST"])
    def post_fixes(request: Request):
        session = get_session(request)
        with session.lock:
            if not session.desired:
                raise ApiError(422, "no desired changes staged")
            result = resolve_conflict(model, session.cfg, session.desired, limits)
            session.fixes = result.fixes
            session.fixes_generation = session.generation
            session.fixes_timed_out = result.timed_out
            payload = {
                "generation": session.generation,
                "directlyApplicable": result.directly_applicable,
                "timedOut": result.timed_out,
                "fixes": _fixes_json(session),
            }
            if result.timed_out:
                return JSONResponse(payload, status_code=504)
            return payload

    @register("/apply", ["POST"])
    async def post_apply(request: Request):
        session = get_session(request)
        body = await request.json()
        if not isinstance(body, dict) or "fix" not in body:
            raise ApiError(422, "body must be {fix, generation}")
        with session.lock:
            generation = body.get("generation")
            if generation != session.generation:
                raise ApiError(
                    409,
                    f"stale generation {generation}; session is at "
                    f"{session.generation}",
                )
            if session.fixes_generation != session.generation:
                raise ApiError(409, "no fixes computed for this generation")
            index = body["fix"]
            if not isinstance(index, int) or not 0 <= index < len(session.fixes):
                raise ApiError(422, f"fix index {index!r} out of range")
            fix = session.fixes[index]
            old = dict(session.cfg.effective)
            new_cfg, report = apply_fix(session.cfg, fix, model)
            deltas = [
                {"symbol": n, "from": str(old[n]), "to": str(v)}
                for n, v in new_cfg.effective.items()
                if old[n] != v
            ]
            session.cfg = new_cfg
            achieved = {
                name for name, _, hit in report.targets if hit
            }
            session.desired = [
                (n, v) for n, v in session.desired if n not in achieved
            ]
            session.bump()
            return {
                "generation": session.generation,
                "applied": index,
                "resolved": report.resolved,
                "fullyApplicable": report.fully_applicable,
                "entries": [
                    {
                        "symbol": e.symbol,
                        "stated": str(e.stated),
                        "applicable": e.applicable,
                        "achieved": e.achieved,
                    }
                    for e in report.entries
                ],
                "targets": [
                    {"symbol": n, "target": str(v), "achieved": hit}
                    for n, v, hit in report.targets
                ],
                "deltas": deltas,
                "valid": not validate(model, session.cfg),
            }

    if static_dir and Path(static_dir).is_dir():
        app.mount("/", StaticFiles(directory=static_dir, html=True), name="ui")

    return app
