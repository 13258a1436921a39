"""Command-line front end.

Every command exits 0 on success and 1 on failure, with a single
"E_CODE: message" line on stderr so scripts can match on the code.
"""

from __future__ import annotations

import argparse
import sys

from .errors import EngineError
from .evalharness import (
    confusion_matrix,
    metrics,
    parse_grid,
    parse_predictions,
    rank_models,
    render_ranking,
    render_report,
)
from .fusion import export_fused, fuse
from .insights import DEFAULT_MIN_RUN_S, render_doc, session_report
from .session import (
    QueryRequest,
    SessionConfig,
    load_fused_session,
    load_session,
    resolve_mapping,
    run_query,
)
from .streams import dominants_of, export_frame_dominants, parse_frames, parse_speech
from .service import make_server


def _cmd_fuse(args) -> int:
    frames = parse_frames(args.frames, fps=args.fps)
    segments = parse_speech(args.speech)
    records = fuse(dominants_of(frames), segments)
    export_fused(records, args.output)
    print(f"fused {len(records)} records -> {args.output}")
    return 0


def _cmd_dominants(args) -> int:
    frames = parse_frames(args.frames, fps=args.fps)
    items = dominants_of(frames)
    export_frame_dominants(items, args.output)
    print(f"wrote {len(items)} frame dominants -> {args.output}")
    return 0


def _cmd_analyze(args) -> int:
    config = SessionConfig(mapping=resolve_mapping(args.mapping))
    session = load_fused_session(args.fused, config)
    params: dict[str, str] = {}
    if args.label is not None:
        params["label"] = args.label
    if args.labels is not None:
        params["labels"] = args.labels
    if args.pattern is not None:
        params["pattern"] = args.pattern
    if args.include_neutral:
        params["include_neutral"] = "1"
    result = run_query(session, QueryRequest(args.query, params))
    sys.stdout.write(render_doc(result.to_dict()))
    return 0


def _cmd_report(args) -> int:
    mapping = resolve_mapping(None)
    config = SessionConfig(fps=args.fps, min_run_s=args.min_run, mapping=mapping)
    session = load_session(args.frames, args.speech, config)
    doc = session_report(list(session.fused), list(session.timeline), mapping)
    with open(args.output, "w", encoding="utf-8") as fh:
        fh.write(render_doc(doc))
    print(f"report on {len(session.fused)} records -> {args.output}")
    return 0


def _cmd_eval(args) -> int:
    preds = parse_predictions(args.pred)
    report = metrics(confusion_matrix(preds), weighted=args.weighted)
    sys.stdout.write(render_report(report))
    return 0


def _cmd_rank(args) -> int:
    ranking = rank_models(parse_grid(args.grid))
    sys.stdout.write(render_ranking(ranking))
    return 0


def _cmd_serve(args) -> int:
    config = SessionConfig(fps=args.fps, mapping=resolve_mapping(None))
    session = load_session(args.frames, args.speech, config)
    server = make_server(session, port=args.port)
    host, port = server.server_address[:2]
    print(f"serving session {session.id!r} ({len(session.fused)} records) on http://{host}:{port}", flush=True)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="emofuse",
        description="Fuse facial and speech emotion streams from research sessions and query the result.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fuse", help="integrate a frames file and a speech file into fused records")
    p.add_argument("--frames", required=True)
    p.add_argument("--speech", required=True)
    p.add_argument("--fps", type=float, default=None, help="needed when the frames file is frame-indexed")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=_cmd_fuse)

    p = sub.add_parser("dominants", help="reduce a frames file to per-frame dominant emotions")
    p.add_argument("--frames", required=True)
    p.add_argument("--fps", type=float, default=None)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=_cmd_dominants)

    p = sub.add_parser("analyze", help="run one named query against a fused file")
    p.add_argument("--fused", required=True)
    p.add_argument("--query", required=True)
    p.add_argument("--label", default=None)
    p.add_argument("--labels", default=None, help="comma-separated speech labels")
    p.add_argument("--pattern", default=None)
    p.add_argument("--mapping", default=None, help="speech-to-basic mapping file")
    p.add_argument("--include-neutral", action="store_true")
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("report", help="load a session and write the full insight report")
    p.add_argument("--frames", required=True)
    p.add_argument("--speech", required=True)
    p.add_argument("--fps", type=float, default=None)
    p.add_argument("--min-run", type=float, default=DEFAULT_MIN_RUN_S)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=_cmd_report)

    p = sub.add_parser("eval", help="score a truth,predicted file")
    p.add_argument("--pred", required=True)
    p.add_argument("--weighted", action="store_true", help="support-weighted instead of macro")
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("rank", help="rank models from a long-form score grid")
    p.add_argument("--grid", required=True)
    p.set_defaults(func=_cmd_rank)

    p = sub.add_parser("serve", help="serve a session over read-only HTTP")
    p.add_argument("--frames", required=True)
    p.add_argument("--speech", required=True)
    p.add_argument("--fps", type=float, default=None)
    p.add_argument("--port", type=int, required=True)
    p.set_defaults(func=_cmd_serve)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except EngineError as exc:
        print(f"{exc.code}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
